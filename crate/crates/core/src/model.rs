//! The revolt game as data: agent types, priors, identity-agnostic contexts,
//! exact context likelihoods, state posteriors and payoffs.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::rational::{format_rational, is_probability, q, Q};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AgentType {
    /// Always revolts.
    Alpha,
    /// Revolts conditionally on the (p, μ) thresholds.
    Chi,
    /// Never revolts.
    Nu,
}

impl AgentType {
    pub const ALL: [AgentType; 3] = [AgentType::Alpha, AgentType::Chi, AgentType::Nu];

    pub fn index(self) -> usize {
        match self {
            AgentType::Alpha => 0,
            AgentType::Chi => 1,
            AgentType::Nu => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            AgentType::Alpha => "alpha",
            AgentType::Chi => "chi",
            AgentType::Nu => "nu",
        }
    }

    pub fn parse(s: &str) -> Option<AgentType> {
        match s {
            "alpha" | "α" => Some(AgentType::Alpha),
            "chi" | "χ" => Some(AgentType::Chi),
            "nu" | "ν" => Some(AgentType::Nu),
            _ => None,
        }
    }
}

impl fmt::Display for AgentType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Action {
    Revolt,
    Stay,
}

/// Per-state distribution over agent types.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TypeDistribution {
    probs: [Q; 3],
}

impl TypeDistribution {
    pub fn new(alpha: Q, chi: Q, nu: Q) -> Result<Self> {
        let probs = [alpha, chi, nu];
        if probs.iter().any(|x| x.is_negative()) {
            return Err(Error::InvalidPrior("type probabilities must be nonnegative".into()));
        }
        let total: Q = probs.iter().sum();
        if !total.is_one() {
            return Err(Error::InvalidPrior(alloc::format!(
                "type probabilities sum to {}, not 1",
                format_rational(&total)
            )));
        }
        Ok(TypeDistribution { probs })
    }

    pub fn prob(&self, t: AgentType) -> &Q {
        &self.probs[t.index()]
    }

    /// Exchanges the α and ν masses.
    pub fn swap_alpha_nu(&self) -> Self {
        let [a, c, n] = self.probs.clone();
        TypeDistribution { probs: [n, c, a] }
    }

    /// Mass of a set of types.
    pub fn mass(&self, types: &[AgentType]) -> Q {
        let mut seen = [false; 3];
        let mut total = Q::zero();
        for t in types {
            if !core::mem::replace(&mut seen[t.index()], true) {
                total += self.prob(*t);
            }
        }
        total
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StateSpec {
    pub name: String,
    pub prob: Q,
    pub types: TypeDistribution,
}

/// Common prior: thresholds plus a distribution over states, each with its
/// own type distribution. State order is significant for two-state
/// algorithms: the first state plays the role of `A`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Prior {
    p: Q,
    mu: Q,
    states: Vec<StateSpec>,
}

impl Prior {
    pub fn new(p: Q, mu: Q, states: Vec<StateSpec>) -> Result<Self> {
        if !is_probability(&p) {
            return Err(Error::InvalidPrior(alloc::format!("p = {} is outside [0, 1]", format_rational(&p))));
        }
        if !is_probability(&mu) {
            return Err(Error::InvalidPrior(alloc::format!("mu = {} is outside [0, 1]", format_rational(&mu))));
        }
        if states.len() < 2 {
            return Err(Error::InvalidPrior("at least two states are required".into()));
        }
        for (i, s) in states.iter().enumerate() {
            if states[..i].iter().any(|o| o.name == s.name) {
                return Err(Error::InvalidPrior(alloc::format!("duplicate state {:?}", s.name)));
            }
            if s.prob.is_negative() {
                return Err(Error::InvalidPrior(alloc::format!("state {:?} has negative probability", s.name)));
            }
        }
        let total: Q = states.iter().map(|s| &s.prob).sum();
        if !total.is_one() {
            return Err(Error::InvalidPrior(alloc::format!(
                "state probabilities sum to {}, not 1",
                format_rational(&total)
            )));
        }
        Ok(Prior { p, mu, states })
    }

    pub fn p(&self) -> &Q {
        &self.p
    }

    pub fn mu(&self) -> &Q {
        &self.mu
    }

    pub fn states(&self) -> &[StateSpec] {
        &self.states
    }

    pub fn state(&self, i: usize) -> &StateSpec {
        &self.states[i]
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn state_names(&self) -> Vec<String> {
        self.states.iter().map(|s| s.name.clone()).collect()
    }

    pub fn state_index(&self, name: &str) -> Result<usize> {
        self.states
            .iter()
            .position(|s| s.name == name)
            .ok_or_else(|| Error::UnknownState(name.to_string()))
    }

    pub fn type_prob(&self, state: usize, t: AgentType) -> &Q {
        self.states[state].types.prob(t)
    }

    pub fn require_two_states(&self) -> Result<()> {
        match self.states.len() {
            2 => Ok(()),
            k => Err(Error::NotTwoStates(k)),
        }
    }

    /// Same states, different thresholds.
    pub fn with_thresholds(&self, p: Q, mu: Q) -> Result<Self> {
        Prior::new(p, mu, self.states.clone())
    }

    /// The two-state prior with states listed in the opposite order.
    pub fn relabeled(&self) -> Self {
        let mut states = self.states.clone();
        states.reverse();
        Prior {
            p: self.p.clone(),
            mu: self.mu.clone(),
            states,
        }
    }

    /// A type never drawn in any state.
    pub fn is_absent(&self, t: AgentType) -> bool {
        self.states.iter().all(|s| s.types.prob(t).is_zero())
    }
}

/// Own type plus neighbour type counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ContextClass {
    pub degree: u32,
    pub own_type: AgentType,
    /// Indexed by [`AgentType::index`].
    pub neighbor_counts: [u32; 3],
}

impl ContextClass {
    pub fn new(own_type: AgentType, alpha: u32, chi: u32, nu: u32) -> Self {
        ContextClass {
            degree: alpha + chi + nu,
            own_type,
            neighbor_counts: [alpha, chi, nu],
        }
    }

    pub fn count(&self, t: AgentType) -> u32 {
        self.neighbor_counts[t.index()]
    }

    pub fn is_consistent(&self) -> bool {
        self.neighbor_counts.iter().sum::<u32>() == self.degree
    }
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

fn multinomial(counts: &[u32; 3]) -> BigInt {
    factorial(counts.iter().sum()) / counts.iter().map(|&c| factorial(c)).product::<BigInt>()
}

fn pow(x: &Q, e: u32) -> Q {
    num_traits::pow(x.clone(), e as usize)
}

/// `Pr[own] · multinomial · ∏ Pr[t]^count` under the state's type distribution.
pub fn context_likelihood_at(c: &ContextClass, state: usize, prior: &Prior) -> Q {
    let types = &prior.state(state).types;
    let mut l = types.prob(c.own_type).clone() * Q::from_integer(multinomial(&c.neighbor_counts));
    for t in AgentType::ALL {
        l *= pow(types.prob(t), c.count(t));
    }
    l
}

pub fn context_likelihood(c: &ContextClass, state: &str, prior: &Prior) -> Result<Q> {
    let s = prior.state_index(state)?;
    Ok(context_likelihood_at(c, s, prior))
}

/// Posterior over states (in prior order) given the context.
pub fn state_posterior(c: &ContextClass, prior: &Prior) -> Result<Vec<Q>> {
    let joint: Vec<Q> = (0..prior.num_states())
        .map(|s| context_likelihood_at(c, s, prior) * &prior.state(s).prob)
        .collect();
    let total: Q = joint.iter().sum();
    if total.is_zero() {
        return Err(Error::ImpossibleContext);
    }
    Ok(joint.into_iter().map(|j| j / &total).collect())
}

/// All contexts of the given degree; every own type when `own_type` is `None`.
pub fn enumerate_contexts(degree: u32, own_type: Option<AgentType>) -> Vec<ContextClass> {
    let owns: Vec<AgentType> = match own_type {
        Some(t) => vec![t],
        None => AgentType::ALL.to_vec(),
    };
    let mut out = Vec::new();
    for own in owns {
        for alpha in 0..=degree {
            for chi in 0..=degree - alpha {
                out.push(ContextClass::new(own, alpha, chi, degree - alpha - chi));
            }
        }
    }
    out
}

/// `f^t` for a single agent: 1 − p or p for χ depending on whether the
/// revolt reached `μ·n` (compared exactly).
pub fn payoff(t: AgentType, action: Action, revolt_count: usize, n: usize, prior: &Prior) -> Q {
    let one = Q::one();
    match (t, action) {
        (AgentType::Alpha, Action::Revolt) | (AgentType::Nu, Action::Stay) => one,
        (AgentType::Alpha, Action::Stay) | (AgentType::Nu, Action::Revolt) => Q::zero(),
        (AgentType::Chi, action) => {
            let succeeded = Q::from_integer(BigInt::from(revolt_count))
                >= prior.mu() * Q::from_integer(BigInt::from(n));
            match (action, succeeded) {
                (Action::Revolt, true) => one - prior.p(),
                (Action::Stay, false) => prior.p().clone(),
                _ => Q::zero(),
            }
        }
    }
}

/// Every χ-owned context of one degree with its per-state likelihood held as
/// an integer numerator. Built once per distinct degree; the algorithms test
/// and sum candidate contexts with integer arithmetic only.
#[derive(Debug, Clone)]
pub struct ChiContextTable {
    pub degree: u32,
    pub contexts: Vec<ContextClass>,
    /// `weights[s][i] / state_den[s]` is the likelihood of context `i` in state `s`.
    weights: Vec<Vec<BigInt>>,
    state_den: Vec<BigInt>,
    /// `joint[s][i] ∝ Pr[s] · likelihood`, on a denominator shared by all states.
    joint: Vec<Vec<BigInt>>,
}

impl ChiContextTable {
    /// Contexts using a type absent from every state are skipped: they have
    /// zero likelihood everywhere.
    pub fn new(degree: u32, prior: &Prior) -> Self {
        let m = prior.num_states();
        let present: Vec<bool> = AgentType::ALL.iter().map(|&t| !prior.is_absent(t)).collect();
        // Per state, type probabilities as integers over a common denominator.
        let mut numer = Vec::with_capacity(m);
        let mut den = Vec::with_capacity(m);
        for s in 0..m {
            let d = AgentType::ALL
                .iter()
                .fold(BigInt::one(), |acc, &t| acc.lcm(prior.type_prob(s, t).denom()));
            let a: Vec<BigInt> = AgentType::ALL
                .iter()
                .map(|&t| {
                    let x = prior.type_prob(s, t);
                    x.numer() * (&d / x.denom())
                })
                .collect();
            numer.push(a);
            den.push(d);
        }
        let powers: Vec<Vec<Vec<BigInt>>> = numer
            .iter()
            .map(|a| {
                a.iter()
                    .map(|base| {
                        let mut v = Vec::with_capacity(degree as usize + 1);
                        let mut acc = BigInt::one();
                        for _ in 0..=degree {
                            v.push(acc.clone());
                            acc *= base;
                        }
                        v
                    })
                    .collect()
            })
            .collect();
        let fact: Vec<BigInt> = {
            let mut v = vec![BigInt::one()];
            for k in 1..=degree {
                let next = v[k as usize - 1].clone() * k;
                v.push(next);
            }
            v
        };
        let chi = AgentType::Chi.index();
        let mut contexts = Vec::new();
        let mut weights = vec![Vec::new(); m];
        for alpha in 0..=degree {
            if alpha > 0 && !present[0] {
                break;
            }
            for nchi in 0..=degree - alpha {
                if nchi > 0 && !present[1] {
                    break;
                }
                let nu = degree - alpha - nchi;
                if nu > 0 && !present[2] {
                    continue;
                }
                let counts = [alpha, nchi, nu];
                let coef = &fact[degree as usize]
                    / (&fact[alpha as usize] * &fact[nchi as usize] * &fact[nu as usize]);
                let ws: Vec<BigInt> = (0..m)
                    .map(|s| {
                        let mut w = &coef * &numer[s][chi];
                        for (t, &k) in counts.iter().enumerate() {
                            w *= &powers[s][t][k as usize];
                        }
                        w
                    })
                    .collect();
                if ws.iter().all(Zero::is_zero) {
                    continue;
                }
                contexts.push(ContextClass::new(AgentType::Chi, alpha, nchi, nu));
                for (s, w) in ws.into_iter().enumerate() {
                    weights[s].push(w);
                }
            }
        }
        let state_den: Vec<BigInt> = den
            .iter()
            .map(|d| num_traits::pow(d.clone(), degree as usize + 1))
            .collect();
        // joint[s][i] = Pr[s] · weights[s][i] / state_den[s], rescaled to a
        // shared denominator K.
        let scaled_den: Vec<BigInt> = (0..m)
            .map(|s| prior.state(s).prob.denom() * &state_den[s])
            .collect();
        let k = scaled_den.iter().fold(BigInt::one(), |acc, d| acc.lcm(d));
        let joint = (0..m)
            .map(|s| {
                let factor = prior.state(s).prob.numer() * (&k / &scaled_den[s]);
                weights[s].iter().map(|w| w * &factor).collect()
            })
            .collect();
        ChiContextTable {
            degree,
            contexts,
            weights,
            state_den,
            joint,
        }
    }

    pub fn len(&self) -> usize {
        self.contexts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.contexts.is_empty()
    }

    pub fn likelihood(&self, state: usize, i: usize) -> Q {
        Q::new(self.weights[state][i].clone(), self.state_den[state].clone())
    }

    /// Whether `Pr[state ∈ favorable | context i] ≥ p`.
    pub fn meets(&self, i: usize, favorable: &[bool], p: &Q) -> bool {
        let (num, den) = self.posterior_parts(i, favorable);
        num * p.denom() >= p.numer() * den
    }

    /// `Pr[state ∈ favorable | context i]`.
    pub fn posterior(&self, i: usize, favorable: &[bool]) -> Q {
        let (num, den) = self.posterior_parts(i, favorable);
        Q::new(num, den)
    }

    pub(crate) fn posterior_parts(&self, i: usize, favorable: &[bool]) -> (BigInt, BigInt) {
        let mut num = BigInt::zero();
        let mut den = BigInt::zero();
        for (s, col) in self.joint.iter().enumerate() {
            den += &col[i];
            if favorable[s] {
                num += &col[i];
            }
        }
        (num, den)
    }

    /// `Pr[χ ∧ context ∈ selected | state]` for one agent of this degree.
    pub fn selected_mass(&self, state: usize, selected: &[bool]) -> Q {
        let total: BigInt = self.weights[state]
            .iter()
            .zip(selected)
            .filter(|(_, &keep)| keep)
            .map(|(w, _)| w)
            .sum();
        Q::new(total, self.state_den[state].clone())
    }
}

/// Random prior with `num_states` states named `S0, S1, …`: type masses on
/// the grid `1/grid`, state weights in `1..=4`, and `p`, `μ` on the same grid
/// strictly inside `(0, 1)`. Requires `grid ≥ 2`.
pub fn random_prior<R: Rng + ?Sized>(rng: &mut R, num_states: usize, grid: i64) -> Prior {
    assert!(grid >= 2 && num_states >= 2);
    let weights: Vec<i64> = (0..num_states).map(|_| rng.gen_range(1..=4)).collect();
    let total: i64 = weights.iter().sum();
    let states = weights
        .iter()
        .enumerate()
        .map(|(i, &w)| {
            let alpha = rng.gen_range(0..=grid);
            let chi = rng.gen_range(0..=grid - alpha);
            StateSpec {
                name: alloc::format!("S{i}"),
                prob: q(w, total),
                types: TypeDistribution::new(q(alpha, grid), q(chi, grid), q(grid - alpha - chi, grid))
                    .expect("grid masses sum to one"),
            }
        })
        .collect();
    let p = q(rng.gen_range(1..grid), grid);
    let mu = q(rng.gen_range(1..grid), grid);
    Prior::new(p, mu, states).expect("valid by construction")
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::rational::q;

    pub(crate) fn motivating_prior() -> Prior {
        Prior::new(
            q(2, 5),
            q(1, 2),
            vec![
                StateSpec {
                    name: "A".into(),
                    prob: q(1, 2),
                    types: TypeDistribution::new(q(0, 1), q(4, 5), q(1, 5)).unwrap(),
                },
                StateSpec {
                    name: "B".into(),
                    prob: q(1, 2),
                    types: TypeDistribution::new(q(0, 1), q(1, 5), q(4, 5)).unwrap(),
                },
            ],
        )
        .unwrap()
    }

    #[test]
    fn likelihood_examples() {
        let prior = motivating_prior();
        let all_chi = ContextClass::new(AgentType::Chi, 0, 4, 0);
        assert_eq!(context_likelihood(&all_chi, "A", &prior).unwrap(), q(1024, 3125));
        assert_eq!(context_likelihood(&all_chi, "B", &prior).unwrap(), q(1, 3125));
        let lonely = ContextClass::new(AgentType::Nu, 0, 0, 0);
        assert_eq!(context_likelihood(&lonely, "B", &prior).unwrap(), q(4, 5));
        assert_eq!(
            context_likelihood(&lonely, "C", &prior),
            Err(Error::UnknownState("C".into()))
        );
    }

    #[test]
    fn posterior_examples() {
        let prior = motivating_prior();
        let three = ContextClass::new(AgentType::Chi, 0, 2, 2);
        assert_eq!(state_posterior(&three, &prior).unwrap()[0], q(4, 5));
        let none = ContextClass::new(AgentType::Nu, 0, 0, 4);
        assert_eq!(state_posterior(&none, &prior).unwrap()[0], q(1, 1025));
        let alpha = ContextClass::new(AgentType::Alpha, 0, 0, 0);
        assert_eq!(state_posterior(&alpha, &prior), Err(Error::ImpossibleContext));
    }

    #[test]
    fn symmetric_prior_gives_half() {
        let d = TypeDistribution::new(q(1, 3), q(1, 3), q(1, 3)).unwrap();
        let prior = Prior::new(
            q(1, 2),
            q(1, 2),
            vec![
                StateSpec { name: "A".into(), prob: q(1, 2), types: d.clone() },
                StateSpec { name: "B".into(), prob: q(1, 2), types: d },
            ],
        )
        .unwrap();
        for c in enumerate_contexts(3, None) {
            assert_eq!(state_posterior(&c, &prior).unwrap(), vec![q(1, 2), q(1, 2)]);
        }
    }

    #[test]
    fn context_counts() {
        assert_eq!(enumerate_contexts(0, Some(AgentType::Chi)).len(), 1);
        assert_eq!(enumerate_contexts(4, Some(AgentType::Chi)).len(), 15);
        assert_eq!(enumerate_contexts(2, None).len(), 18);
        assert!(enumerate_contexts(5, None).iter().all(ContextClass::is_consistent));
    }

    #[test]
    fn payoff_examples() {
        let prior = motivating_prior();
        assert_eq!(payoff(AgentType::Alpha, Action::Revolt, 0, 10, &prior), q(1, 1));
        assert_eq!(payoff(AgentType::Nu, Action::Revolt, 10, 10, &prior), q(0, 1));
        assert_eq!(payoff(AgentType::Chi, Action::Revolt, 500, 1000, &prior), q(3, 5));
        assert_eq!(payoff(AgentType::Chi, Action::Stay, 499, 1000, &prior), q(2, 5));
        assert_eq!(payoff(AgentType::Chi, Action::Stay, 500, 1000, &prior), q(0, 1));
    }

    #[test]
    fn likelihoods_sum_to_one_per_degree() {
        let prior = motivating_prior();
        for d in 0..6 {
            for s in 0..2 {
                let total: Q = enumerate_contexts(d, None)
                    .iter()
                    .map(|c| context_likelihood_at(c, s, &prior))
                    .sum();
                assert!(total.is_one());
            }
        }
    }

    #[test]
    fn chi_table_matches_direct_likelihoods() {
        let prior = Prior::new(
            q(1, 3),
            q(1, 2),
            vec![
                StateSpec {
                    name: "A".into(),
                    prob: q(2, 7),
                    types: TypeDistribution::new(q(1, 6), q(2, 3), q(1, 6)).unwrap(),
                },
                StateSpec {
                    name: "B".into(),
                    prob: q(5, 7),
                    types: TypeDistribution::new(q(1, 10), q(3, 10), q(3, 5)).unwrap(),
                },
            ],
        )
        .unwrap();
        let table = ChiContextTable::new(3, &prior);
        assert_eq!(table.len(), 10);
        for (i, c) in table.contexts.iter().enumerate() {
            let post = state_posterior(c, &prior).unwrap();
            assert_eq!(table.posterior(i, &[true, false]), post[0]);
            for s in 0..2 {
                assert_eq!(table.likelihood(s, i), context_likelihood_at(c, s, &prior));
            }
        }
    }

    #[test]
    fn chi_table_skips_absent_types() {
        let table = ChiContextTable::new(4, &motivating_prior());
        assert_eq!(table.len(), 5);
        let all = [true; 5];
        assert_eq!(table.selected_mass(0, &all), q(4, 5));
    }

    #[test]
    fn prior_validation() {
        let d = TypeDistribution::new(q(0, 1), q(1, 1), q(0, 1)).unwrap();
        let mk = |a: Q, b: Q| {
            Prior::new(
                q(1, 2),
                q(1, 2),
                vec![
                    StateSpec { name: "A".into(), prob: a, types: d.clone() },
                    StateSpec { name: "B".into(), prob: b, types: d.clone() },
                ],
            )
        };
        assert!(mk(q(1, 2), q(1, 2)).is_ok());
        assert!(mk(q(1, 2), q(1, 3)).is_err());
        assert!(mk(q(3, 2), q(-1, 2)).is_err());
        assert!(TypeDistribution::new(q(1, 2), q(1, 2), q(1, 2)).is_err());
    }
}
