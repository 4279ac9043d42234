//! Monte-Carlo type assignments on a concrete graph, counting α agents, χ
//! agents and χ agents whose context makes them candidates.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;

use crate::algorithms::candidate_fractions;
use crate::bounds::{chernoff_envelope, dependency_chi_star_bound_graph};
use crate::error::{invalid, Result};
use crate::graph::ConcreteGraph;
use crate::hp::Real;
use crate::model::{AgentType, ChiContextTable, Prior};
use crate::netgen::{derive_seed, rng_from_seed};
use crate::rational::Q;

/// Counts from one sampled assignment.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TrialCounts {
    pub n: usize,
    pub alpha: usize,
    pub chi: usize,
    /// χ agents in candidate contexts.
    pub candidates: usize,
}

impl TrialCounts {
    /// α agents plus candidate χ agents: the revolters in the candidate state.
    pub fn revolters(&self) -> usize {
        self.alpha + self.candidates
    }

    pub fn candidate_fraction(&self) -> Q {
        Q::new(BigInt::from(self.revolters()), BigInt::from(self.n))
    }
}

/// Samples types conditioned on a state and classifies χ contexts against a
/// fixed candidate-state set.
pub struct CandidateSampler<'a> {
    prior: &'a Prior,
    /// Per degree: neighbour counts `[α, χ, ν]` → candidate?
    selection: BTreeMap<u32, BTreeMap<[u32; 3], bool>>,
    /// Per state: cumulative integer weights of α, χ, ν and their total.
    cumulative: Vec<([u64; 3], u64)>,
}

impl<'a> CandidateSampler<'a> {
    pub fn new(prior: &'a Prior, graph: &ConcreteGraph, favorable: &[bool]) -> Result<Self> {
        if favorable.len() != prior.num_states() {
            return Err(invalid("favorable", "one flag per state required"));
        }
        let mut selection = BTreeMap::new();
        for v in 0..graph.n() {
            let d = graph.degree(v) as u32;
            selection.entry(d).or_insert_with(|| {
                let table = ChiContextTable::new(d, prior);
                (0..table.len())
                    .map(|i| (table.contexts[i].neighbor_counts, table.meets(i, favorable, prior.p())))
                    .collect()
            });
        }
        let mut cumulative = Vec::with_capacity(prior.num_states());
        for spec in prior.states() {
            let probs: Vec<&Q> = AgentType::ALL.iter().map(|&t| spec.types.prob(t)).collect();
            let lcm = probs.iter().fold(BigInt::from(1), |acc, p| acc.lcm(p.denom()));
            let total = lcm.to_u64().ok_or_else(|| invalid("prior", "type denominators too large to sample"))?;
            let mut acc = 0u64;
            let mut cum = [0u64; 3];
            for (slot, p) in cum.iter_mut().zip(&probs) {
                acc += (p.numer() * (&lcm / p.denom())).to_u64().expect("bounded by lcm");
                *slot = acc;
            }
            cumulative.push((cum, total));
        }
        Ok(CandidateSampler {
            prior,
            selection,
            cumulative,
        })
    }

    pub fn prior(&self) -> &Prior {
        self.prior
    }

    pub fn sample_types<R: Rng>(&self, n: usize, state: usize, rng: &mut R) -> Vec<AgentType> {
        let (cum, total) = self.cumulative[state];
        (0..n)
            .map(|_| {
                let u = rng.gen_range(0..total);
                let k = cum.iter().position(|&c| u < c).expect("u < total");
                AgentType::ALL[k]
            })
            .collect()
    }

    pub fn count(&self, graph: &ConcreteGraph, types: &[AgentType]) -> TrialCounts {
        let mut counts = TrialCounts {
            n: graph.n(),
            alpha: 0,
            chi: 0,
            candidates: 0,
        };
        for v in 0..graph.n() {
            match types[v] {
                AgentType::Alpha => counts.alpha += 1,
                AgentType::Chi => {
                    counts.chi += 1;
                    let mut seen = [0u32; 3];
                    for &u in graph.neighbors(v) {
                        seen[types[u].index()] += 1;
                    }
                    let table = &self.selection[&(graph.degree(v) as u32)];
                    // A context observed in a sampled state has positive likelihood there.
                    if table.get(&seen).copied().unwrap_or(false) {
                        counts.candidates += 1;
                    }
                }
                AgentType::Nu => {}
            }
        }
        counts
    }
}

/// Summary of a concentration experiment.
#[derive(Clone, Debug)]
pub struct ConcentrationReport {
    pub state: usize,
    pub trials: Vec<TrialCounts>,
    /// `e_s(C_C ∪ α)` on the graph's degree sequence.
    pub expected_fraction: Q,
    pub mean_fraction: Q,
    pub chi_star: u64,
    pub envelope_delta: Q,
    /// Allowed deviation (in agents) from the dependent bound at `envelope_delta`.
    pub envelope: Real,
    /// `|revolters − expected·n|` per trial.
    pub deviations: Vec<Q>,
    pub max_deviation: Q,
    pub within_envelope: bool,
}

impl ConcentrationReport {
    /// Deviation quantile by nearest rank, `q` in `[0, 1]`.
    pub fn deviation_quantile(&self, q: f64) -> f64 {
        let mut devs: Vec<f64> = self.deviations.iter().map(crate::rational::to_f64).collect();
        devs.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
        if devs.is_empty() {
            return 0.0;
        }
        let rank = libm::ceil(q * devs.len() as f64).max(1.0) as usize;
        devs[rank.min(devs.len()) - 1]
    }
}

/// Runs `trials` assignments conditioned on `state`, with the first state as
/// the candidate state. Trial `k` uses seed `derive_seed(seed, state, k)`.
pub fn concentration_experiment(
    graph: &ConcreteGraph,
    prior: &Prior,
    state: usize,
    trials: usize,
    seed: u64,
    envelope_delta: &Q,
) -> Result<ConcentrationReport> {
    prior.require_two_states()?;
    if state >= prior.num_states() {
        return Err(invalid("state", "out of range"));
    }
    if trials == 0 {
        return Err(invalid("trials", "must be at least 1"));
    }
    let n = graph.n();
    let degseq = graph.degree_sequence()?;
    let favorable = [true, false];
    let expected_fraction = candidate_fractions(&degseq, prior, &favorable)?[state].clone();
    let chi_star = dependency_chi_star_bound_graph(graph);
    let envelope = chernoff_envelope(n, &Q::from_integer(BigInt::from(chi_star)), envelope_delta)?;
    let sampler = CandidateSampler::new(prior, graph, &favorable)?;
    let expected_count = &expected_fraction * Q::from_integer(BigInt::from(n));
    let mut results = Vec::with_capacity(trials);
    let mut deviations = Vec::with_capacity(trials);
    let mut total = Q::zero();
    for k in 0..trials {
        let mut rng = rng_from_seed(derive_seed(seed, state as u64, k as u64));
        let types = sampler.sample_types(n, state, &mut rng);
        let counts = sampler.count(graph, &types);
        total += counts.candidate_fraction();
        let observed = Q::from_integer(BigInt::from(counts.revolters()));
        deviations.push(num_traits::Signed::abs(&(observed - &expected_count)));
        results.push(counts);
    }
    let max_deviation = deviations.iter().max().cloned().unwrap_or_else(Q::zero);
    let within_envelope = Real::from_q(&max_deviation) <= envelope;
    Ok(ConcentrationReport {
        state,
        mean_fraction: total / Q::from_integer(BigInt::from(trials)),
        trials: results,
        expected_fraction,
        chi_star,
        envelope_delta: envelope_delta.clone(),
        envelope,
        deviations,
        max_deviation,
        within_envelope,
    })
}
