use factional_core::algorithms::{
    algorithm1, algorithm1_auto_relabel, algorithm1_general, algorithm1_multistate, algorithm1_multistate_with,
    candidate_fractions, smallest_revolt, RemovalOrder,
};
use factional_core::epistemic::{random_grid_threshold, random_model, Event};
use factional_core::graph::{ConcreteGraph, DegreeSequence};
use factional_core::model::{
    enumerate_contexts, random_prior, state_posterior, AgentType, Prior, StateSpec, TypeDistribution,
};
use factional_core::netgen::rng_from_seed;
use factional_core::oracle::{nonisomorphic_graphs, Oracle};
use factional_core::rational::q;
use factional_core::Q;
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::Rng;

fn all_events(universe: usize) -> impl Iterator<Item = Event> {
    (0..1u64 << universe).map(move |m| Event::from_mask(universe, m))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn belief_operator_laws(seed in any::<u64>()) {
        let mut rng = rng_from_seed(seed);
        let model = random_model(&mut rng, 5, 3);
        let p = random_grid_threshold(&mut rng);
        let n = model.space().len();
        for agent in 0..model.agents().len() {
            prop_assert_eq!(model.belief(agent, &p, &Event::full(n)), Event::full(n));
            for e in all_events(n) {
                let b = model.belief(agent, &p, &e);
                prop_assert_eq!(model.belief(agent, &p, &b), b.clone(), "idempotence");
                for f in all_events(n).filter(|f| e.is_subset(f)) {
                    prop_assert!(b.is_subset(&model.belief(agent, &p, &f)), "monotonicity");
                }
            }
        }
    }

    #[test]
    fn search_agrees_with_coalition_characterisation(seed in any::<u64>()) {
        let mut rng = rng_from_seed(seed);
        let model = random_model(&mut rng, 5, 3);
        let p = random_grid_threshold(&mut rng);
        let mu = random_grid_threshold(&mut rng);
        let table = model.common_belief_search_all(&p, &mu).unwrap();
        for (mask, searched) in table.iter().enumerate() {
            let f = Event::from_mask(model.space().len(), mask as u64);
            prop_assert_eq!(searched, &model.common_belief_coalition(&p, &mu, &f));
        }
    }

    #[test]
    fn posteriors_sum_to_one(seed in any::<u64>(), degree in 0u32..6) {
        let mut rng = rng_from_seed(seed);
        let prior = random_prior(&mut rng, 3, 10);
        for c in enumerate_contexts(degree, None) {
            if let Ok(post) = state_posterior(&c, &prior) {
                prop_assert_eq!(post.iter().sum::<Q>(), Q::one());
                prop_assert!(post.iter().all(|x| *x >= Q::zero()));
            }
        }
    }

    #[test]
    fn algorithm1_ignores_degree_order(seed in any::<u64>()) {
        let mut rng = rng_from_seed(seed);
        let prior = random_prior(&mut rng, 2, 10);
        let mut degrees: Vec<u32> = (0..rng.gen_range(1..30)).map(|_| rng.gen_range(0..7)).collect();
        let before = algorithm1(&DegreeSequence::new(degrees.clone()).unwrap(), &prior);
        degrees.reverse();
        let shift = degrees.len() / 3;
        degrees.rotate_left(shift);
        let after = algorithm1(&DegreeSequence::new(degrees).unwrap(), &prior);
        prop_assert_eq!(format!("{before:?}"), format!("{after:?}"));
    }

    #[test]
    fn candidates_shrink_as_p_grows(seed in any::<u64>(), d in 1u32..7) {
        let mut rng = rng_from_seed(seed);
        let prior = random_prior(&mut rng, 2, 10);
        let degseq = DegreeSequence::constant(10, d).unwrap();
        let mut last: Option<Vec<Q>> = None;
        for k in 1..20 {
            let at = prior.with_thresholds(q(k, 20), prior.mu().clone()).unwrap();
            let now = candidate_fractions(&degseq, &at, &[true, false]).unwrap();
            if let Some(prev) = &last {
                prop_assert!(now.iter().zip(prev).all(|(a, b)| a <= b));
            }
            last = Some(now);
        }
    }

    #[test]
    fn smallest_never_exceeds_largest(seed in any::<u64>(), d in 1u32..6) {
        let mut rng = rng_from_seed(seed);
        let prior = random_prior(&mut rng, 2, 10);
        let degseq = DegreeSequence::constant(12, d).unwrap();
        if let (Ok(large), Ok(small)) = (algorithm1_auto_relabel(&degseq, &prior), smallest_revolt(&degseq, &prior)) {
            for ((_, lo), (_, hi)) in small.sizes.iter().zip(large.sizes.iter()) {
                prop_assert!(lo <= hi, "{:?} vs {:?}", small.sizes, large.sizes);
            }
        }
    }

    #[test]
    fn general_without_high_degrees_is_algorithm1(seed in any::<u64>()) {
        let mut rng = rng_from_seed(seed);
        let prior = random_prior(&mut rng, 2, 10);
        let degrees: Vec<u32> = (0..27).map(|_| rng.gen_range(0..3)).collect();
        let degseq = DegreeSequence::new(degrees).unwrap();
        // cutoff = 3·27^{1/3} = 9 exceeds every degree.
        let general = algorithm1_general(&degseq, &prior, &q(3, 1), &q(1, 100));
        let plain = algorithm1(&degseq, &prior);
        match (general, plain) {
            (Ok(g), Ok(p)) => {
                prop_assert!(g.high_fraction.is_zero());
                prop_assert_eq!(g.report.sizes, p);
            }
            (Err(a), Err(b)) => prop_assert_eq!(a, b),
            (g, p) => prop_assert!(false, "{g:?} vs {p:?}"),
        }
    }

    #[test]
    fn multistate_is_the_largest_self_consistent_set(seed in any::<u64>(), m in 2usize..6, d in 1u32..5) {
        let mut rng = rng_from_seed(seed);
        let prior = random_prior(&mut rng, m, 10);
        let degseq = DegreeSequence::constant(8, d).unwrap();
        let batch = algorithm1_multistate(&degseq, &prior).unwrap();
        let single = algorithm1_multistate_with(&degseq, &prior, RemovalOrder::OneAtATime).unwrap();
        prop_assert_eq!(&batch.survivors, &single.survivors);
        prop_assert_eq!(&batch.sizes, &single.sizes);
        prop_assert_eq!(batch.survivors, exhaustive_scan(&degseq, &prior));
    }

    #[test]
    fn oracle_matches_smallest_and_largest_with_point_masses(seed in any::<u64>()) {
        let mut rng = rng_from_seed(seed);
        let n = rng.gen_range(2..=6usize);
        let catalog = nonisomorphic_graphs(n).unwrap();
        let graph = catalog[rng.gen_range(0..catalog.len())].clone();
        let prior = point_mass_prior(&mut rng, n);
        check_against_oracle(&graph, &prior)?;
    }
}

/// Union of all candidate-state sets `S ⊆ initial` in which every member
/// passes its gate; such sets are closed under union, so the union is itself
/// self-consistent and maximal.
fn exhaustive_scan(degseq: &DegreeSequence, prior: &Prior) -> Vec<bool> {
    let m = prior.num_states();
    let mu = prior.mu();
    let mut best = vec![false; m];
    for mask in 1u32..(1 << m) {
        let set: Vec<bool> = (0..m).map(|s| mask >> s & 1 == 1).collect();
        let initial_ok = (0..m)
            .filter(|&s| set[s])
            .all(|s| prior.state(s).types.mass(&[AgentType::Chi, AgentType::Alpha]) >= *mu);
        if !initial_ok {
            continue;
        }
        let fractions = candidate_fractions(degseq, prior, &set).unwrap();
        if (0..m).filter(|&s| set[s]).all(|s| fractions[s] >= *mu) {
            for s in 0..m {
                best[s] |= set[s];
            }
        }
    }
    best
}

/// Two states with deterministic type assignments, `μ·n` never an integer.
fn point_mass_prior<R: Rng>(rng: &mut R, n: usize) -> Prior {
    let point = |t: usize| {
        let mut mass = [Q::zero(), Q::zero(), Q::zero()];
        mass[t] = Q::one();
        let [a, c, v] = mass;
        TypeDistribution::new(a, c, v).unwrap()
    };
    let wa = rng.gen_range(1..=4);
    let wb = rng.gen_range(1..=4);
    let states = vec![
        StateSpec { name: "A".into(), prob: q(wa, wa + wb), types: point(rng.gen_range(0..3)) },
        StateSpec { name: "B".into(), prob: q(wb, wa + wb), types: point(rng.gen_range(0..3)) },
    ];
    let p = q(rng.gen_range(1..8), 8);
    let mu = q(2 * rng.gen_range(0..n as i64) + 1, 2 * n as i64);
    Prior::new(p, mu, states).unwrap()
}

fn check_against_oracle(graph: &ConcreteGraph, prior: &Prior) -> Result<(), TestCaseError> {
    let degseq = graph.degree_sequence().unwrap();
    let oracle = Oracle::new(graph, prior).unwrap();
    let least = oracle.least_equilibrium();
    let greatest = oracle.greatest_equilibrium();
    prop_assert!(least.verified && greatest.verified);
    let small = smallest_revolt(&degseq, prior).unwrap();
    let large = algorithm1_auto_relabel(&degseq, prior).unwrap();
    for s in 0..2 {
        prop_assert_eq!(&small.sizes.x[s], &oracle.expected_revolt_fraction(&least.profile, s), "least, state {}", s);
        prop_assert_eq!(&large.sizes.x[s], &oracle.expected_revolt_fraction(&greatest.profile, s), "greatest, state {}", s);
    }
    Ok(())
}

#[test]
fn oracle_point_mass_examples() {
    let triangle = ConcreteGraph::complete(3);
    let mut rng = rng_from_seed(11);
    for _ in 0..20 {
        let prior = point_mass_prior(&mut rng, 3);
        check_against_oracle(&triangle, &prior).unwrap();
    }
}
