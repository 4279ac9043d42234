//! Largest supported revolts on degree sequences and the promise problem.
//!
//! Every quantity is an expected fraction of the population in a given state:
//! `e_s(τ)` for a set of types, and `e_s(C)` for a set of contexts `C`, which
//! averages over the degree sequence the probability that an agent of that
//! degree has a context in `C`.

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{invalid, Error, Result};
use crate::graph::DegreeSequence;
use crate::model::{context_likelihood_at, AgentType, ChiContextTable, ContextClass, Prior};
use crate::rational::{format_rational, Q};

/// Expected largest-revolt fraction per state, in prior state order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RevoltSizes {
    pub states: Vec<String>,
    pub x: Vec<Q>,
}

impl RevoltSizes {
    pub fn get(&self, state: &str) -> Option<&Q> {
        self.states.iter().position(|s| s == state).map(|i| &self.x[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Q)> {
        self.states.iter().map(String::as_str).zip(&self.x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PromiseOutcome {
    /// A revolt of size μ* is supported in both states.
    OmegaCase,
    /// Supported in state `A` only.
    ACase,
    /// Supported in neither state.
    EmptyCase,
    /// The perturbed runs disagree.
    Null,
}

impl PromiseOutcome {
    pub fn symbol(self) -> &'static str {
        match self {
            PromiseOutcome::OmegaCase => "Omega",
            PromiseOutcome::ACase => "A",
            PromiseOutcome::EmptyCase => "Empty",
            PromiseOutcome::Null => "Null",
        }
    }
}

impl fmt::Display for PromiseOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// Which threshold a traced quantity was compared against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThresholdKind {
    P,
    Mu,
    MuStar,
}

impl ThresholdKind {
    pub fn name(self) -> &'static str {
        match self {
            ThresholdKind::P => "p",
            ThresholdKind::Mu => "mu",
            ThresholdKind::MuStar => "mu_star",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Comparison {
    pub quantity: String,
    pub value: Q,
    pub against: ThresholdKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    NoCandidateStates,
    AllCandidateStates,
    /// Only the first state is a candidate; `gate` records whether the
    /// candidate contexts plus α reach μ in that state.
    FirstOnly { gate: bool },
}

/// The values a run compared against its thresholds. A run is robust to
/// perturbing `p` or `μ` as long as no listed value lies between the old and
/// the new threshold.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecisionTrace {
    pub branch: Branch,
    pub comparisons: Vec<Comparison>,
}

impl DecisionTrace {
    fn push(&mut self, quantity: impl Into<String>, value: Q, against: ThresholdKind) {
        self.comparisons.push(Comparison {
            quantity: quantity.into(),
            value,
            against,
        });
    }

    /// Smallest distance from any traced value to the threshold it was
    /// compared against.
    pub fn margin(&self, p: &Q, mu: &Q, mu_star: Option<&Q>) -> Option<Q> {
        self.comparisons
            .iter()
            .filter_map(|c| {
                let t = match c.against {
                    ThresholdKind::P => p,
                    ThresholdKind::Mu => mu,
                    ThresholdKind::MuStar => mu_star?,
                };
                Some((&c.value - t).abs())
            })
            .min()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Algorithm1Report {
    pub sizes: RevoltSizes,
    pub trace: DecisionTrace,
    /// True when the states had to be swapped to satisfy `X_A ≥ X_B`.
    pub relabeled: bool,
}

/// Caches one χ-context table per distinct degree. Tables depend on the type
/// and state distributions only, so one evaluator serves every `(p, μ)`.
pub struct Evaluator {
    prior: Prior,
    histogram: BTreeMap<u32, usize>,
    n: usize,
    tables: BTreeMap<u32, ChiContextTable>,
    /// Same game with the two states swapped, built on first relabel.
    swapped: Option<Box<Evaluator>>,
}

/// Candidate-context mass per state plus the posterior extremes seen while
/// classifying.
struct CandidateMass {
    per_state: Vec<Q>,
    min_candidate: Option<Q>,
    max_noncandidate: Option<Q>,
}

impl Evaluator {
    pub fn new(prior: &Prior, degseq: &DegreeSequence) -> Self {
        Evaluator {
            prior: prior.clone(),
            histogram: degseq.histogram(),
            n: degseq.len(),
            tables: BTreeMap::new(),
            swapped: None,
        }
    }

    pub fn prior(&self) -> &Prior {
        &self.prior
    }

    fn table(&mut self, d: u32) -> &ChiContextTable {
        let prior = &self.prior;
        self.tables.entry(d).or_insert_with(|| ChiContextTable::new(d, prior))
    }

    /// Algorithm 1 at `(p, μ)`, swapping the states when they are mislabeled.
    /// Sizes keep the original names and order.
    pub fn algorithm1_auto_relabel(&mut self, p: &Q, mu: &Q) -> Result<Algorithm1Report> {
        self.relabeling_split(p, mu, None)
    }

    fn relabeling_split(&mut self, p: &Q, mu: &Q, high_from: Option<u32>) -> Result<Algorithm1Report> {
        match self.algorithm1_split(p, mu, high_from) {
            Err(Error::MislabeledStates(first)) => {
                let swapped = self.swapped.get_or_insert_with(|| {
                    Box::new(Evaluator {
                        prior: self.prior.relabeled(),
                        histogram: self.histogram.clone(),
                        n: self.n,
                        tables: BTreeMap::new(),
                        swapped: None,
                    })
                });
                let mut report = swapped.algorithm1_split(p, mu, high_from).map_err(|e| match e {
                    Error::MislabeledStates(second) => {
                        Error::MislabeledStates(alloc::format!("{first}; after swapping: {second}"))
                    }
                    other => other,
                })?;
                report.sizes.states.reverse();
                report.sizes.x.reverse();
                report.relabeled = true;
                Ok(report)
            }
            other => other,
        }
    }

    /// `e_s(τ)` for a set of types.
    pub fn type_fraction(&self, state: usize, types: &[AgentType]) -> Q {
        self.prior.state(state).types.mass(types)
    }

    /// `e_s(C_C)` where `C_C = {c ∈ C(χ) : Pr[state ∈ favorable | c] ≥ p}`,
    /// restricted to degrees accepted by `include`.
    fn candidate_mass(&mut self, favorable: &[bool], p: &Q, include: impl Fn(u32) -> bool) -> CandidateMass {
        let m = self.prior.num_states();
        let mut per_state = vec![Q::zero(); m];
        let mut min_candidate: Option<(BigInt, BigInt)> = None;
        let mut max_noncandidate: Option<(BigInt, BigInt)> = None;
        let degrees: Vec<(u32, usize)> = self.histogram.iter().map(|(&d, &c)| (d, c)).collect();
        for (d, count) in degrees {
            if !include(d) {
                continue;
            }
            let table = self.table(d);
            let mut selected = Vec::with_capacity(table.len());
            for i in 0..table.len() {
                let (num, den) = table.posterior_parts(i, favorable);
                let keep = &num * p.denom() >= p.numer() * &den;
                let slot = if keep { &mut min_candidate } else { &mut max_noncandidate };
                let replace = match slot {
                    None => true,
                    Some((n0, d0)) => {
                        let lhs = &num * &*d0;
                        let rhs = &*n0 * &den;
                        if keep {
                            lhs < rhs
                        } else {
                            lhs > rhs
                        }
                    }
                };
                if replace {
                    *slot = Some((num, den));
                }
                selected.push(keep);
            }
            let weight = Q::from_integer(BigInt::from(count));
            for (s, acc) in per_state.iter_mut().enumerate() {
                *acc += table.selected_mass(s, &selected) * &weight;
            }
        }
        let n = Q::from_integer(BigInt::from(self.n));
        CandidateMass {
            per_state: per_state.into_iter().map(|x| x / &n).collect(),
            min_candidate: min_candidate.map(|(a, b)| Q::new(a, b)),
            max_noncandidate: max_noncandidate.map(|(a, b)| Q::new(a, b)),
        }
    }

    /// Fraction of agents whose degree satisfies `pred`.
    fn degree_fraction(&self, pred: impl Fn(u32) -> bool) -> Q {
        let count: usize = self.histogram.iter().filter(|(&d, _)| pred(d)).map(|(_, &c)| c).sum();
        Q::new(BigInt::from(count), BigInt::from(self.n))
    }

    /// Algorithm 1 at thresholds `(p, μ)`, without relabeling.
    pub fn algorithm1(&mut self, p: &Q, mu: &Q) -> Result<Algorithm1Report> {
        self.algorithm1_split(p, mu, None)
    }

    /// Algorithm 1 where agents with degree `≥ high_from` are treated as
    /// learning the state (when `Some`).
    fn algorithm1_split(&mut self, p: &Q, mu: &Q, high_from: Option<u32>) -> Result<Algorithm1Report> {
        self.prior.require_two_states()?;
        let names = self.prior.state_names();
        let alpha = [self.type_fraction(0, &[AgentType::Alpha]), self.type_fraction(1, &[AgentType::Alpha])];
        let chi_alpha = [
            self.type_fraction(0, &[AgentType::Chi, AgentType::Alpha]),
            self.type_fraction(1, &[AgentType::Chi, AgentType::Alpha]),
        ];
        let mut trace = DecisionTrace {
            branch: Branch::NoCandidateStates,
            comparisons: Vec::new(),
        };
        for s in 0..2 {
            trace.push(alloc::format!("e_{}(chi+alpha)", names[s]), chi_alpha[s].clone(), ThresholdKind::Mu);
        }
        let candidate = [chi_alpha[0] >= *mu, chi_alpha[1] >= *mu];
        let x: Vec<Q> = match candidate {
            [false, false] => alpha.to_vec(),
            [true, true] => {
                trace.branch = Branch::AllCandidateStates;
                chi_alpha.to_vec()
            }
            [false, true] => {
                return Err(Error::MislabeledStates(alloc::format!(
                    "only {:?} is a candidate state",
                    names[1]
                )))
            }
            [true, false] => {
                let low = |d: u32| high_from.is_none_or(|h| d < h);
                let mass = self.candidate_mass(&[true, false], p, low);
                if let Some(v) = mass.min_candidate {
                    trace.push("min candidate posterior", v, ThresholdKind::P);
                }
                if let Some(v) = mass.max_noncandidate {
                    trace.push("max non-candidate posterior", v, ThresholdKind::P);
                }
                let high_fraction = match high_from {
                    Some(h) => self.degree_fraction(|d| d >= h),
                    None => Q::zero(),
                };
                let revealed: Vec<Q> = (0..2)
                    .map(|s| &high_fraction * self.prior.type_prob(s, AgentType::Chi))
                    .collect();
                let base: Vec<Q> = (0..2).map(|s| &mass.per_state[s] + &alpha[s]).collect();
                let gate_value = &base[0] + &revealed[0];
                trace.push(alloc::format!("e_{}(C_C+alpha)", names[0]), gate_value.clone(), ThresholdKind::Mu);
                let gate = gate_value >= *mu;
                trace.branch = Branch::FirstOnly { gate };
                if gate {
                    let with_b = &base[1] + &revealed[1];
                    let xb = if high_from.is_some() {
                        trace.push(alloc::format!("e_{}(C_C+alpha+H)", names[1]), with_b.clone(), ThresholdKind::Mu);
                        if with_b >= *mu {
                            with_b
                        } else {
                            base[1].clone()
                        }
                    } else {
                        base[1].clone()
                    };
                    vec![gate_value, xb]
                } else {
                    alpha.to_vec()
                }
            }
        };
        if x[0] < x[1] {
            return Err(Error::MislabeledStates(alloc::format!(
                "X_{} = {} < X_{} = {}",
                names[0],
                format_rational(&x[0]),
                names[1],
                format_rational(&x[1])
            )));
        }
        Ok(Algorithm1Report {
            sizes: RevoltSizes { states: names, x },
            trace,
            relabeled: false,
        })
    }
}

/// `e_s(τ ∪ C)`: a set of types plus a set of contexts. Contexts whose own
/// type is also listed among the types would be counted twice and are
/// rejected.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Selector {
    pub types: Vec<AgentType>,
    pub contexts: Vec<ContextClass>,
}

impl Selector {
    pub fn types(types: &[AgentType]) -> Self {
        Selector {
            types: types.to_vec(),
            contexts: Vec::new(),
        }
    }

    pub fn contexts(contexts: Vec<ContextClass>) -> Self {
        Selector {
            types: Vec::new(),
            contexts,
        }
    }
}

pub fn expected_fraction(state: &str, selector: &Selector, prior: &Prior, degseq: &DegreeSequence) -> Result<Q> {
    let s = prior.state_index(state)?;
    if let Some(c) = selector.contexts.iter().find(|c| selector.types.contains(&c.own_type)) {
        return Err(invalid(
            "selector",
            alloc::format!("context with own type {} overlaps the selected types", c.own_type),
        ));
    }
    let mut total = prior.state(s).types.mass(&selector.types);
    let histogram = degseq.histogram();
    let distinct: BTreeSet<&ContextClass> = selector.contexts.iter().collect();
    let mut ctx_mass = Q::zero();
    for c in distinct {
        if !c.is_consistent() {
            return Err(invalid("selector", "context counts do not sum to its degree"));
        }
        if let Some(&count) = histogram.get(&c.degree) {
            ctx_mass += context_likelihood_at(c, s, prior) * Q::from_integer(BigInt::from(count));
        }
    }
    total += ctx_mass / Q::from_integer(BigInt::from(degseq.len()));
    Ok(total)
}

/// Candidate contexts of one degree: χ contexts with `Pr[first state | c] ≥ p`.
pub fn candidate_contexts(degree: u32, prior: &Prior) -> Result<Vec<ContextClass>> {
    prior.require_two_states()?;
    let table = ChiContextTable::new(degree, prior);
    Ok((0..table.len())
        .filter(|&i| table.meets(i, &[true, false], prior.p()))
        .map(|i| table.contexts[i])
        .collect())
}

/// Largest revolt supported in each of two states. The first state of the
/// prior plays `A`.
pub fn algorithm1(degseq: &DegreeSequence, prior: &Prior) -> Result<RevoltSizes> {
    Ok(algorithm1_report(degseq, prior)?.sizes)
}

pub fn algorithm1_report(degseq: &DegreeSequence, prior: &Prior) -> Result<Algorithm1Report> {
    Evaluator::new(prior, degseq).algorithm1(prior.p(), prior.mu())
}

/// Algorithm 1, swapping the two states and retrying when the labels are
/// the wrong way round. Sizes are always reported under the original names
/// and in the original order.
pub fn algorithm1_auto_relabel(degseq: &DegreeSequence, prior: &Prior) -> Result<Algorithm1Report> {
    run_relabeling(prior, degseq, prior.p(), prior.mu(), None)
}

fn run_relabeling(
    prior: &Prior,
    degseq: &DegreeSequence,
    p: &Q,
    mu: &Q,
    high_from: Option<u32>,
) -> Result<Algorithm1Report> {
    Evaluator::new(prior, degseq).relabeling_split(p, mu, high_from)
}

/// Ω if both sizes reach μ*, A if only the first does, ∅ otherwise.
pub fn algorithm2(sizes: &RevoltSizes, mu_star: &Q) -> PromiseOutcome {
    let first = sizes.x[0] >= *mu_star;
    let second = sizes.x[1] >= *mu_star;
    match (first, second) {
        (true, true) => PromiseOutcome::OmegaCase,
        (true, false) => PromiseOutcome::ACase,
        _ => PromiseOutcome::EmptyCase,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PromiseInstance {
    pub degseq: DegreeSequence,
    pub prior: Prior,
    pub mu_star: Q,
    pub epsilon: Q,
    pub delta: Q,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubRun {
    pub p: Q,
    pub mu: Q,
    pub report: Algorithm1Report,
    pub outcome: PromiseOutcome,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PromiseReport {
    pub outcome: PromiseOutcome,
    /// Run at `(p + δ/3, μ + ε/3)`.
    pub upper: SubRun,
    /// Run at `(p − δ/3, μ − ε/3)`.
    pub lower: SubRun,
}

/// The perturbed thresholds `(p ± δ/3, μ ± ε/3)`, validated to lie in (0, 1).
pub fn perturbed_thresholds(prior: &Prior, epsilon: &Q, delta: &Q) -> Result<[(Q, Q); 2]> {
    if !epsilon.is_positive() {
        return Err(invalid("epsilon", "must be positive"));
    }
    if !delta.is_positive() {
        return Err(invalid("delta", "must be positive"));
    }
    let three = Q::from_integer(BigInt::from(3));
    let dp = delta / &three;
    let dm = epsilon / &three;
    let runs = [
        (prior.p() + &dp, prior.mu() + &dm),
        (prior.p() - &dp, prior.mu() - &dm),
    ];
    let inside = |x: &Q| x.is_positive() && *x < Q::one();
    for (p, mu) in &runs {
        if !inside(p) {
            return Err(invalid("delta", alloc::format!("p ± delta/3 = {} leaves (0, 1)", format_rational(p))));
        }
        if !inside(mu) {
            return Err(invalid("epsilon", alloc::format!("mu ± epsilon/3 = {} leaves (0, 1)", format_rational(mu))));
        }
    }
    Ok(runs)
}

fn sub_runs(
    degseq: &DegreeSequence,
    prior: &Prior,
    epsilon: &Q,
    delta: &Q,
    auto_relabel: bool,
) -> Result<[(Q, Q, Algorithm1Report); 2]> {
    let [(pu, mu_u), (pl, mu_l)] = perturbed_thresholds(prior, epsilon, delta)?;
    let run = |p: &Q, mu: &Q| {
        if auto_relabel {
            run_relabeling(prior, degseq, p, mu, None)
        } else {
            Evaluator::new(prior, degseq).algorithm1(p, mu)
        }
    };
    let upper = run(&pu, &mu_u)?;
    let lower = run(&pl, &mu_l)?;
    Ok([(pu, mu_u, upper), (pl, mu_l, lower)])
}

fn decide(mu_star: &Q, runs: &[(Q, Q, Algorithm1Report); 2]) -> PromiseReport {
    let sub = |(p, mu, report): &(Q, Q, Algorithm1Report)| {
        let mut report = report.clone();
        for (state, x) in report.sizes.iter() {
            report.trace.comparisons.push(Comparison {
                quantity: alloc::format!("X_{state}"),
                value: x.clone(),
                against: ThresholdKind::MuStar,
            });
        }
        let outcome = algorithm2(&report.sizes, mu_star);
        SubRun {
            p: p.clone(),
            mu: mu.clone(),
            report,
            outcome,
        }
    };
    let upper = sub(&runs[0]);
    let lower = sub(&runs[1]);
    let outcome = if upper.outcome == lower.outcome {
        upper.outcome
    } else {
        PromiseOutcome::Null
    };
    PromiseReport { outcome, upper, lower }
}

/// Algorithm 3: two Algorithm 1 runs at perturbed thresholds, Null on
/// disagreement.
pub fn algorithm3(inst: &PromiseInstance) -> Result<PromiseReport> {
    algorithm3_with(inst, false)
}

pub fn algorithm3_with(inst: &PromiseInstance, auto_relabel: bool) -> Result<PromiseReport> {
    if !inst.mu_star.is_positive() && !inst.mu_star.is_zero() {
        return Err(invalid("mu_star", "must be nonnegative"));
    }
    let runs = sub_runs(&inst.degseq, &inst.prior, &inst.epsilon, &inst.delta, auto_relabel)?;
    Ok(decide(&inst.mu_star, &runs))
}

/// Algorithm 3 at every `μ*` of the grid. The two perturbed Algorithm 1 runs
/// do not depend on `μ*`, so they are computed once.
pub fn equilibria_map(
    degseq: &DegreeSequence,
    prior: &Prior,
    mu_grid: &[Q],
    epsilon: &Q,
    delta: &Q,
) -> Result<Vec<(Q, PromiseOutcome)>> {
    equilibria_map_with(degseq, prior, mu_grid, epsilon, delta, false)
}

pub fn equilibria_map_with(
    degseq: &DegreeSequence,
    prior: &Prior,
    mu_grid: &[Q],
    epsilon: &Q,
    delta: &Q,
    auto_relabel: bool,
) -> Result<Vec<(Q, PromiseOutcome)>> {
    if let Some(bad) = mu_grid.iter().find(|m| m.is_negative() || **m > Q::one()) {
        return Err(invalid("mu_grid", alloc::format!("{} is outside [0, 1]", format_rational(bad))));
    }
    let runs = sub_runs(degseq, prior, epsilon, delta, auto_relabel)?;
    Ok(mu_grid
        .iter()
        .map(|m| (m.clone(), decide(m, &runs).outcome))
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmallestRevolt {
    /// `1 − X'_s` per original state, in prior order.
    pub sizes: RevoltSizes,
    /// The game with α/ν swapped and thresholds complemented.
    pub transformed: Prior,
    pub transformed_report: Algorithm1Report,
}

/// The game in which staying plays the role of revolting: α and ν masses
/// swapped, `p → 1 − p`, `μ → 1 − μ`. Each state keeps its name and its
/// probability.
pub fn transformed_prior(prior: &Prior) -> Result<Prior> {
    let states = prior
        .states()
        .iter()
        .map(|s| crate::model::StateSpec {
            name: s.name.clone(),
            prob: s.prob.clone(),
            types: s.types.swap_alpha_nu(),
        })
        .collect();
    Prior::new(Q::one() - prior.p(), Q::one() - prior.mu(), states)
}

/// Smallest revolt supported in each state: one minus the largest "stay"
/// coalition of the transformed game in the state built from the same type
/// distribution.
pub fn smallest_revolt(degseq: &DegreeSequence, prior: &Prior) -> Result<SmallestRevolt> {
    prior.require_two_states()?;
    let transformed = transformed_prior(prior)?;
    let report = algorithm1_auto_relabel(degseq, &transformed)?;
    let x = report.sizes.x.iter().map(|x| Q::one() - x).collect();
    Ok(SmallestRevolt {
        sizes: RevoltSizes {
            states: report.sizes.states.clone(),
            x,
        },
        transformed,
        transformed_report: report,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneralReport {
    pub report: Algorithm1Report,
    /// Degrees `≥ cutoff` count as high.
    pub cutoff: u64,
    pub high_fraction: Q,
    /// True when the high-degree fraction was below ε and high-degree agents
    /// were treated like everyone else.
    pub high_ignored: bool,
}

/// `⌈c · n^{1/3}⌉`, exactly: the least `h` with `h³ ≥ c³·n`.
pub fn degree_cutoff(c: &Q, n: usize) -> u64 {
    if !c.is_positive() {
        return 0;
    }
    let target = num_traits::pow(c.numer().clone(), 3) * BigInt::from(n);
    let den3 = num_traits::pow(c.denom().clone(), 3);
    let ok = |h: u64| {
        let h = BigInt::from(h);
        &h * &h * &h * &den3 >= target
    };
    let mut hi = 1u64;
    while !ok(hi) {
        hi *= 2;
    }
    let mut lo = 0u64;
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if ok(mid) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    lo
}

/// Algorithm 1 with high-degree agents treated as knowing the state.
pub fn algorithm1_general(
    degseq: &DegreeSequence,
    prior: &Prior,
    cutoff_c: &Q,
    epsilon: &Q,
) -> Result<GeneralReport> {
    algorithm1_general_with(degseq, prior, cutoff_c, epsilon, false)
}

pub fn algorithm1_general_with(
    degseq: &DegreeSequence,
    prior: &Prior,
    cutoff_c: &Q,
    epsilon: &Q,
    auto_relabel: bool,
) -> Result<GeneralReport> {
    prior.require_two_states()?;
    if !cutoff_c.is_positive() {
        return Err(invalid("cutoff_c", "must be positive"));
    }
    if epsilon.is_negative() {
        return Err(invalid("epsilon", "must be nonnegative"));
    }
    let cutoff = degree_cutoff(cutoff_c, degseq.len());
    let high = degseq.degrees().iter().filter(|&&d| d as u64 >= cutoff).count();
    let high_fraction = Q::new(BigInt::from(high), BigInt::from(degseq.len()));
    let high_ignored = high_fraction < *epsilon;
    let high_from = if high_ignored {
        None
    } else {
        Some(u32::try_from(cutoff).unwrap_or(u32::MAX))
    };
    let report = if auto_relabel {
        run_relabeling(prior, degseq, prior.p(), prior.mu(), high_from)?
    } else {
        Evaluator::new(prior, degseq).algorithm1_split(prior.p(), prior.mu(), high_from)?
    };
    Ok(GeneralReport {
        report,
        cutoff,
        high_fraction,
        high_ignored,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RemovalOrder {
    /// Remove every failing state each round.
    Batch,
    /// Remove only the first failing state each round.
    OneAtATime,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultistateReport {
    pub sizes: RevoltSizes,
    /// States with `e_s(χ ∪ α) ≥ μ`.
    pub initial_candidates: Vec<bool>,
    /// The surviving candidate states.
    pub survivors: Vec<bool>,
    pub rounds: usize,
}

/// Largest revolt for any number of states by iterated removal of candidate
/// states whose gate fails.
pub fn algorithm1_multistate(degseq: &DegreeSequence, prior: &Prior) -> Result<MultistateReport> {
    algorithm1_multistate_with(degseq, prior, RemovalOrder::Batch)
}

pub fn algorithm1_multistate_with(
    degseq: &DegreeSequence,
    prior: &Prior,
    order: RemovalOrder,
) -> Result<MultistateReport> {
    let mut eval = Evaluator::new(prior, degseq);
    let (p, mu) = (prior.p().clone(), prior.mu().clone());
    let m = prior.num_states();
    let alpha: Vec<Q> = (0..m).map(|s| eval.type_fraction(s, &[AgentType::Alpha])).collect();
    let initial: Vec<bool> = (0..m)
        .map(|s| eval.type_fraction(s, &[AgentType::Chi, AgentType::Alpha]) >= mu)
        .collect();
    let mut survivors = initial.clone();
    let mut rounds = 0;
    let mass = loop {
        rounds += 1;
        let mass = eval.candidate_mass(&survivors, &p, |_| true).per_state;
        let failing: Vec<usize> = (0..m)
            .filter(|&s| survivors[s] && &mass[s] + &alpha[s] < mu)
            .collect();
        if failing.is_empty() {
            break mass;
        }
        match order {
            RemovalOrder::Batch => failing.iter().for_each(|&s| survivors[s] = false),
            RemovalOrder::OneAtATime => survivors[failing[0]] = false,
        }
    };
    let any = survivors.iter().any(|&s| s);
    let x = (0..m)
        .map(|s| if any { &mass[s] + &alpha[s] } else { alpha[s].clone() })
        .collect();
    Ok(MultistateReport {
        sizes: RevoltSizes {
            states: prior.state_names(),
            x,
        },
        initial_candidates: initial,
        survivors,
        rounds,
    })
}

/// `e_s(C_C(S) ∪ α)` per state for an arbitrary candidate-state set `S`.
pub fn candidate_fractions(degseq: &DegreeSequence, prior: &Prior, favorable: &[bool]) -> Result<Vec<Q>> {
    if favorable.len() != prior.num_states() {
        return Err(invalid("favorable", "one flag per state required"));
    }
    let mut eval = Evaluator::new(prior, degseq);
    let mass = eval.candidate_mass(favorable, prior.p(), |_| true).per_state;
    Ok(mass
        .into_iter()
        .enumerate()
        .map(|(s, x)| x + eval.type_fraction(s, &[AgentType::Alpha]))
        .collect())
}
