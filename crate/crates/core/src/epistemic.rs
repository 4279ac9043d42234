//! Finite epistemic models: belief operators, evident (p, μ)-belief and
//! common (p, μ)-belief.
//!
//! The outcome space is finite and every subset is an event. Probabilities are
//! kept as integer weights over a common denominator so that every `≥ p`
//! comparison is exact.
//!
//! Three routes to common (p, μ)-belief are provided:
//!
//! * [`EpistemicModel::common_belief_fixpoint`] intersects the belief hierarchy
//!   `F¹, F², …` where `Fⁿ` is the set of outcomes at which at least a μ
//!   fraction of agents p-believe `Fⁿ⁻¹`.
//! * [`EpistemicModel::common_belief_by_search`] enumerates every event and
//!   looks for an evident witness with uniform agent coalitions.
//! * [`EpistemicModel::common_belief_coalition`] computes the same set as the
//!   search, as a union of greatest fixpoints, one per pair of coalitions.
//!
//! The search and coalition routes always agree. The hierarchy agrees with them
//! when `⌈μ·|I|⌉ ≤ 1` or `μ = 1`; for intermediate quotas the hierarchy may
//! contain outcomes at which no uniform coalition exists (see the
//! `hierarchy_can_exceed_search` test).

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive};
use rand::Rng;

use crate::error::{Error, Result};
use crate::rational::{format_rational, q, Q};

/// Largest outcome space accepted by [`EpistemicModel::common_belief_by_search`].
pub const SEARCH_LIMIT: usize = 20;

/// A subset of the outcomes of a finite space, stored as a bitset.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Event {
    words: Vec<u64>,
    universe: usize,
}

impl Event {
    pub fn empty(universe: usize) -> Self {
        Event {
            words: vec![0; universe.div_ceil(64)],
            universe,
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut e = Event::empty(universe);
        for i in 0..universe {
            e.insert(i);
        }
        e
    }

    pub fn from_indices(universe: usize, members: impl IntoIterator<Item = usize>) -> Self {
        let mut e = Event::empty(universe);
        for i in members {
            e.insert(i);
        }
        e
    }

    /// Event whose members are the set bits of `mask` (universe ≤ 64).
    pub fn from_mask(universe: usize, mask: u64) -> Self {
        debug_assert!(universe <= 64);
        let mut e = Event::empty(universe);
        if universe > 0 {
            e.words[0] = mask;
        }
        e
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn insert(&mut self, i: usize) {
        assert!(i < self.universe, "outcome index {i} out of range");
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn contains(&self, i: usize) -> bool {
        i < self.universe && self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_subset(&self, other: &Event) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn intersection(&self, other: &Event) -> Event {
        Event {
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(),
            universe: self.universe,
        }
    }

    pub fn union(&self, other: &Event) -> Event {
        Event {
            words: self.words.iter().zip(&other.words).map(|(a, b)| a | b).collect(),
            universe: self.universe,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.universe).filter(move |&i| self.contains(i))
    }
}

impl fmt::Debug for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Finite probability space with strictly positive outcome probabilities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteProbSpace {
    outcomes: Vec<String>,
    prob: Vec<Q>,
    /// `prob[i] = weight[i] / denominator`
    weight: Vec<BigInt>,
}

impl FiniteProbSpace {
    pub fn new(outcomes: Vec<String>, prob: Vec<Q>) -> Result<Self> {
        if outcomes.is_empty() {
            return Err(Error::InvalidModel("outcome set is empty".into()));
        }
        if outcomes.len() != prob.len() {
            return Err(Error::InvalidModel("one probability per outcome required".into()));
        }
        let distinct: BTreeSet<&String> = outcomes.iter().collect();
        if distinct.len() != outcomes.len() {
            return Err(Error::InvalidModel("duplicate outcome label".into()));
        }
        if let Some((o, _)) = outcomes.iter().zip(&prob).find(|(_, p)| !p.is_positive()) {
            return Err(Error::InvalidModel(alloc::format!(
                "outcome {o:?} must have strictly positive probability"
            )));
        }
        let total: Q = prob.iter().sum();
        if !total.is_one() {
            return Err(Error::InvalidModel(alloc::format!(
                "probabilities sum to {}, not 1",
                format_rational(&total)
            )));
        }
        let den = prob.iter().fold(BigInt::one(), |acc, p| acc.lcm(p.denom()));
        let weight = prob
            .iter()
            .map(|p| p.numer() * (&den / p.denom()))
            .collect();
        Ok(FiniteProbSpace {
            outcomes,
            prob,
            weight,
        })
    }

    /// Equally likely outcomes.
    pub fn uniform(outcomes: Vec<String>) -> Result<Self> {
        let n = outcomes.len() as i64;
        let prob = (0..n).map(|_| q(1, n.max(1))).collect();
        Self::new(outcomes, prob)
    }

    pub fn len(&self) -> usize {
        self.outcomes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.outcomes.is_empty()
    }

    pub fn outcomes(&self) -> &[String] {
        &self.outcomes
    }

    pub fn prob(&self, i: usize) -> &Q {
        &self.prob[i]
    }

    pub fn index_of(&self, outcome: &str) -> Option<usize> {
        self.outcomes.iter().position(|o| o == outcome)
    }

    pub fn event(&self, members: &[&str]) -> Result<Event> {
        let mut e = Event::empty(self.len());
        for m in members {
            let i = self
                .index_of(m)
                .ok_or_else(|| Error::InvalidModel(alloc::format!("unknown outcome {m:?}")))?;
            e.insert(i);
        }
        Ok(e)
    }

    pub fn probability(&self, e: &Event) -> Q {
        e.iter().map(|i| self.prob[i].clone()).sum()
    }

    fn weight_of(&self, e: &Event) -> BigInt {
        e.iter().map(|i| &self.weight[i]).sum()
    }
}

/// An agent's information partition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AgentPartition {
    cells: Vec<Event>,
    cell_of: Vec<usize>,
}

impl AgentPartition {
    pub fn new(universe: usize, cells: Vec<Event>) -> Result<Self> {
        let mut cell_of = vec![usize::MAX; universe];
        for (ci, cell) in cells.iter().enumerate() {
            if cell.universe() != universe {
                return Err(Error::InvalidModel("partition cell over a different space".into()));
            }
            if cell.is_empty() {
                return Err(Error::InvalidModel("partition has an empty cell".into()));
            }
            for o in cell.iter() {
                if cell_of[o] != usize::MAX {
                    return Err(Error::InvalidModel(alloc::format!(
                        "outcome {o} appears in two cells"
                    )));
                }
                cell_of[o] = ci;
            }
        }
        if cell_of.contains(&usize::MAX) {
            return Err(Error::InvalidModel("partition does not cover every outcome".into()));
        }
        Ok(AgentPartition { cells, cell_of })
    }

    /// The partition with a single cell (the agent learns nothing).
    pub fn trivial(universe: usize) -> Self {
        AgentPartition {
            cells: vec![Event::full(universe)],
            cell_of: vec![0; universe],
        }
    }

    pub fn cells(&self) -> &[Event] {
        &self.cells
    }

    /// `Π(ω)`.
    pub fn cell_containing(&self, outcome: usize) -> &Event {
        &self.cells[self.cell_of[outcome]]
    }
}

/// Probability space plus one information partition per agent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EpistemicModel {
    space: FiniteProbSpace,
    agents: Vec<String>,
    partitions: Vec<AgentPartition>,
    cell_weight: Vec<Vec<BigInt>>,
}

/// Result of [`EpistemicModel::is_evident_belief`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Evidence {
    pub evident: bool,
    /// Every agent `j` with `E ⊆ B_j^p(E)`, in agent order.
    pub witnesses: Vec<usize>,
}

/// The belief hierarchy explored by [`EpistemicModel::common_belief_hierarchy`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hierarchy {
    /// `F¹, F², …` up to the first repeated level.
    pub levels: Vec<Event>,
    /// Index into `levels` at which the sequence starts repeating.
    pub cycle_start: usize,
    /// `⋂_{n≥1} Fⁿ`.
    pub result: Event,
}

impl Hierarchy {
    /// True when every level is contained in the previous one.
    pub fn is_decreasing(&self) -> bool {
        self.levels.windows(2).all(|w| w[1].is_subset(&w[0]))
    }
}

impl EpistemicModel {
    pub fn new(
        space: FiniteProbSpace,
        agents: Vec<String>,
        partitions: Vec<AgentPartition>,
    ) -> Result<Self> {
        if agents.is_empty() {
            return Err(Error::InvalidModel("at least one agent is required".into()));
        }
        if agents.len() != partitions.len() {
            return Err(Error::InvalidModel("one partition per agent required".into()));
        }
        let distinct: BTreeSet<&String> = agents.iter().collect();
        if distinct.len() != agents.len() {
            return Err(Error::InvalidModel("duplicate agent id".into()));
        }
        if partitions.iter().any(|p| p.cell_of.len() != space.len()) {
            return Err(Error::InvalidModel("partition over a different space".into()));
        }
        let cell_weight = partitions
            .iter()
            .map(|p| p.cells.iter().map(|c| space.weight_of(c)).collect())
            .collect();
        Ok(EpistemicModel {
            space,
            agents,
            partitions,
            cell_weight,
        })
    }

    pub fn space(&self) -> &FiniteProbSpace {
        &self.space
    }

    pub fn agents(&self) -> &[String] {
        &self.agents
    }

    pub fn partition(&self, agent: usize) -> &AgentPartition {
        &self.partitions[agent]
    }

    pub fn agent_index(&self, agent: &str) -> Result<usize> {
        self.agents
            .iter()
            .position(|a| a == agent)
            .ok_or_else(|| Error::InvalidAgent(agent.to_string()))
    }

    fn check_event(&self, e: &Event) -> Result<()> {
        if e.universe() != self.space.len() {
            return Err(Error::InvalidModel("event over a different space".into()));
        }
        Ok(())
    }

    /// Smallest coalition size `k` with `k ≥ μ·|I|`.
    pub fn quota(&self, mu: &Q) -> usize {
        let need = (mu * Q::from_integer(BigInt::from(self.agents.len()))).ceil();
        if need.is_negative() {
            0
        } else {
            need.to_integer().to_usize().unwrap_or(usize::MAX)
        }
    }

    /// `B_i^p(E)` by agent name.
    pub fn belief_operator(&self, agent: &str, p: &Q, e: &Event) -> Result<Event> {
        let i = self.agent_index(agent)?;
        self.check_event(e)?;
        Ok(self.belief(i, p, e))
    }

    /// `B_i^p(E) = {ω : Pr[E | Π_i(ω)] ≥ p}` for agent index `i`.
    pub fn belief(&self, agent: usize, p: &Q, e: &Event) -> Event {
        let part = &self.partitions[agent];
        let mut out = Event::empty(self.space.len());
        for (cell, cw) in part.cells.iter().zip(&self.cell_weight[agent]) {
            let hit = self.space.weight_of(&e.intersection(cell));
            // hit / cw >= p.numer / p.denom
            if hit * p.denom() >= p.numer() * cw {
                for o in cell.iter() {
                    out.insert(o);
                }
            }
        }
        out
    }

    /// Definition of evident (p, μ)-belief with the maximal witness set.
    pub fn is_evident_belief(&self, p: &Q, mu: &Q, e: &Event) -> Evidence {
        let witnesses: Vec<usize> = (0..self.agents.len())
            .filter(|&j| e.is_subset(&self.belief(j, p, e)))
            .collect();
        Evidence {
            evident: witnesses.len() >= self.quota(mu),
            witnesses,
        }
    }

    /// `{ω : at least ⌈μ|I|⌉ agents p-believe E at ω}`.
    pub fn factional_belief(&self, p: &Q, mu: &Q, e: &Event) -> Event {
        let need = self.quota(mu);
        let beliefs: Vec<Event> = (0..self.agents.len()).map(|j| self.belief(j, p, e)).collect();
        let n = self.space.len();
        Event::from_indices(
            n,
            (0..n).filter(|&o| beliefs.iter().filter(|b| b.contains(o)).count() >= need),
        )
    }

    /// Iterates `Fⁿ = factional_belief(Fⁿ⁻¹)` from `F⁰ = F` until a level
    /// repeats and intersects every level `n ≥ 1`.
    pub fn common_belief_hierarchy(&self, p: &Q, mu: &Q, f: &Event) -> Hierarchy {
        let mut seen: BTreeMap<Event, usize> = BTreeMap::new();
        let mut levels = Vec::new();
        let mut result = Event::full(self.space.len());
        let mut current = f.clone();
        loop {
            let next = self.factional_belief(p, mu, &current);
            if let Some(&start) = seen.get(&next) {
                return Hierarchy {
                    levels,
                    cycle_start: start,
                    result,
                };
            }
            seen.insert(next.clone(), levels.len());
            result = result.intersection(&next);
            levels.push(next.clone());
            current = next;
        }
    }

    /// `E^{p,μ}(F) = ⋂_{n≥1} Fⁿ`.
    pub fn common_belief_fixpoint(&self, p: &Q, mu: &Q, f: &Event) -> Event {
        self.common_belief_hierarchy(p, mu, f).result
    }

    fn search_guard(&self) -> Result<()> {
        if self.space.len() > SEARCH_LIMIT {
            return Err(Error::SpaceTooLarge {
                outcomes: self.space.len(),
                limit: SEARCH_LIMIT,
            });
        }
        Ok(())
    }

    /// Per agent, the masks of all events `E` with `E ⊆ B_j^p(E)`.
    fn self_evident_counts(&self, p: &Q) -> Vec<u8> {
        let n = self.space.len();
        let k = self.agents.len();
        (0u64..1 << n)
            .map(|mask| {
                let e = Event::from_mask(n, mask);
                (0..k)
                    .filter(|&j| e.is_subset(&self.belief(j, p, &e)))
                    .count()
                    .min(u8::MAX as usize) as u8
            })
            .collect()
    }

    /// Whether `F` is common (p, μ)-belief at `omega`, by enumerating every
    /// event that contains `omega`.
    pub fn common_belief_by_search(&self, p: &Q, mu: &Q, f: &Event, omega: usize) -> Result<bool> {
        self.search_guard()?;
        self.check_event(f)?;
        let n = self.space.len();
        if omega >= n {
            return Err(Error::InvalidModel(alloc::format!("outcome index {omega} out of range")));
        }
        let need = self.quota(mu);
        let k = self.agents.len();
        let believers: Vec<u64> = (0..k).map(|j| mask_of(&self.belief(j, p, f))).collect();
        let bit = 1u64 << omega;
        for mask in 0u64..1 << n {
            if mask & bit == 0 {
                continue;
            }
            if believers.iter().filter(|&&b| mask & !b == 0).count() < need {
                continue;
            }
            let e = Event::from_mask(n, mask);
            let evident = (0..k)
                .filter(|&j| e.is_subset(&self.belief(j, p, &e)))
                .count();
            if evident >= need {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// The set of outcomes at which [`Self::common_belief_by_search`] holds.
    pub fn common_belief_search_set(&self, p: &Q, mu: &Q, f: &Event) -> Result<Event> {
        self.search_guard()?;
        self.check_event(f)?;
        Ok(self.search_set_with(&self.self_evident_counts(p), p, mu, f))
    }

    /// Search verdicts for every event `F` at once, indexed by the mask of `F`.
    /// Shares the per-event evidence table between all `F`.
    pub fn common_belief_search_all(&self, p: &Q, mu: &Q) -> Result<Vec<Event>> {
        self.search_guard()?;
        let counts = self.self_evident_counts(p);
        let n = self.space.len();
        Ok((0u64..1 << n)
            .map(|fm| self.search_set_with(&counts, p, mu, &Event::from_mask(n, fm)))
            .collect())
    }

    fn search_set_with(&self, evident_counts: &[u8], p: &Q, mu: &Q, f: &Event) -> Event {
        let n = self.space.len();
        let need = self.quota(mu);
        let believers: Vec<u64> = (0..self.agents.len())
            .map(|j| mask_of(&self.belief(j, p, f)))
            .collect();
        let mut acc = 0u64;
        for (mask, &count) in evident_counts.iter().enumerate() {
            let mask = mask as u64;
            if (count as usize) < need || mask & !acc == 0 {
                continue;
            }
            if believers.iter().filter(|&&b| mask & !b == 0).count() >= need {
                acc |= mask;
            }
        }
        Event::from_mask(n, acc)
    }

    /// Common (p, μ)-belief via coalitions: the union over coalitions `J`, `J'`
    /// of size `⌈μ|I|⌉` of the largest `J`-evident event inside
    /// `⋂_{j∈J'} B_j^p(F)`.
    pub fn common_belief_coalition(&self, p: &Q, mu: &Q, f: &Event) -> Event {
        let n = self.space.len();
        let k = self.agents.len();
        let need = self.quota(mu);
        if need == 0 {
            return Event::full(n);
        }
        if need > k {
            return Event::empty(n);
        }
        let beliefs_of_f: Vec<Event> = (0..k).map(|j| self.belief(j, p, f)).collect();
        let coalitions = subsets_of_size(k, need);
        let mut out = Event::empty(n);
        for believers in &coalitions {
            let target = believers
                .iter()
                .fold(Event::full(n), |acc, &j| acc.intersection(&beliefs_of_f[j]));
            if target.is_empty() {
                continue;
            }
            for evidents in &coalitions {
                let mut e = target.clone();
                loop {
                    let next = evidents
                        .iter()
                        .fold(target.clone(), |acc, &j| acc.intersection(&self.belief(j, p, &e)));
                    if next == e {
                        break;
                    }
                    e = next;
                }
                out = out.union(&e);
            }
        }
        out
    }
}

fn mask_of(e: &Event) -> u64 {
    e.words.first().copied().unwrap_or(0)
}

fn subsets_of_size(k: usize, size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(size);
    fn rec(start: usize, k: usize, size: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for i in start..k {
            cur.push(i);
            rec(i + 1, k, size, cur, out);
            cur.pop();
        }
    }
    rec(0, k, size, &mut current, &mut out);
    out
}

/// Random model with `1..=max_outcomes` outcomes (integer weights in 1..=5)
/// and `1..=max_agents` agents with uniformly random partitions.
pub fn random_model<R: Rng + ?Sized>(rng: &mut R, max_outcomes: usize, max_agents: usize) -> EpistemicModel {
    let n = rng.gen_range(1..=max_outcomes);
    let k = rng.gen_range(1..=max_agents);
    let weights: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=5)).collect();
    let total: i64 = weights.iter().sum();
    let outcomes = (0..n).map(|i| alloc::format!("w{i}")).collect();
    let space = FiniteProbSpace::new(outcomes, weights.iter().map(|&w| q(w, total)).collect())
        .expect("weights are positive and normalised");
    let partitions = (0..k)
        .map(|_| {
            let labels: Vec<usize> = (0..n).map(|_| rng.gen_range(0..n)).collect();
            let mut cells: BTreeMap<usize, Event> = BTreeMap::new();
            for (o, l) in labels.into_iter().enumerate() {
                cells.entry(l).or_insert_with(|| Event::empty(n)).insert(o);
            }
            AgentPartition::new(n, cells.into_values().collect()).expect("labels cover every outcome")
        })
        .collect();
    let agents = (0..k).map(|j| alloc::format!("agent{j}")).collect();
    EpistemicModel::new(space, agents, partitions).expect("consistent by construction")
}

/// Random threshold on the grid `{0, 1/8, …, 1}`.
pub fn random_grid_threshold<R: Rng + ?Sized>(rng: &mut R) -> Q {
    q(rng.gen_range(0..=8), 8)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{one, zero};
    use alloc::vec;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn labels(n: usize) -> Vec<String> {
        (1..=n).map(|i| alloc::format!("{i}")).collect()
    }

    fn die() -> FiniteProbSpace {
        FiniteProbSpace::uniform(labels(6)).unwrap()
    }

    fn ev(space: &FiniteProbSpace, xs: &[&str]) -> Event {
        space.event(xs).unwrap()
    }

    fn two_agent_die() -> EpistemicModel {
        let s = die();
        let p1 = AgentPartition::new(
            6,
            vec![ev(&s, &["1", "2"]), ev(&s, &["3", "4"]), ev(&s, &["5", "6"])],
        )
        .unwrap();
        let p2 = AgentPartition::trivial(6);
        EpistemicModel::new(s, vec!["1".into(), "2".into()], vec![p1, p2]).unwrap()
    }

    #[test]
    fn fair_die_even_is_believed_at_one_half() {
        let s = die();
        let m = EpistemicModel::new(s.clone(), vec!["i".into()], vec![AgentPartition::trivial(6)]).unwrap();
        let even = ev(&s, &["2", "4", "6"]);
        assert_eq!(m.belief_operator("i", &q(1, 2), &even).unwrap(), Event::full(6));
        assert_eq!(m.belief_operator("i", &q(51, 100), &even).unwrap(), Event::empty(6));
    }

    #[test]
    fn belief_at_zero_is_everything() {
        let m = two_agent_die();
        let e = ev(m.space(), &["3"]);
        assert_eq!(m.belief(0, &zero(), &e), Event::full(6));
        assert_eq!(m.belief(1, &zero(), &Event::empty(6)), Event::full(6));
    }

    #[test]
    fn belief_on_halves() {
        let s = die();
        let part = AgentPartition::new(6, vec![ev(&s, &["1", "2", "3"]), ev(&s, &["4", "5", "6"])]).unwrap();
        let m = EpistemicModel::new(s.clone(), vec!["i".into()], vec![part]).unwrap();
        let e = ev(&s, &["1", "2", "5"]);
        assert_eq!(m.belief(0, &q(2, 3), &e), ev(&s, &["1", "2", "3"]));
    }

    #[test]
    fn unknown_agent_rejected() {
        let m = two_agent_die();
        assert_eq!(
            m.belief_operator("7", &one(), &Event::empty(6)),
            Err(Error::InvalidAgent("7".into()))
        );
    }

    #[test]
    fn evident_belief_examples() {
        let m = two_agent_die();
        let full = m.is_evident_belief(&q(3, 4), &one(), &Event::full(6));
        assert!(full.evident);
        assert_eq!(full.witnesses, vec![0, 1]);
        let empty = m.is_evident_belief(&q(3, 4), &one(), &Event::empty(6));
        assert!(empty.evident);
        assert_eq!(empty.witnesses, vec![0, 1]);
        let pair = m.is_evident_belief(&one(), &q(1, 2), &ev(m.space(), &["1", "2"]));
        assert!(pair.evident);
        assert_eq!(pair.witnesses, vec![0]);
        assert!(!m.is_evident_belief(&one(), &one(), &ev(m.space(), &["1", "2"])).evident);
    }

    #[test]
    fn fixpoint_examples() {
        let m = two_agent_die();
        let half = q(1, 2);
        assert_eq!(m.common_belief_fixpoint(&q(1, 3), &half, &Event::full(6)), Event::full(6));
        assert_eq!(m.common_belief_fixpoint(&q(1, 3), &half, &Event::empty(6)), Event::empty(6));
        let f = ev(m.space(), &["1", "2"]);
        assert_eq!(m.common_belief_fixpoint(&one(), &half, &f), f);
    }

    #[test]
    fn search_examples() {
        let m = two_agent_die();
        for o in 0..6 {
            assert!(m.common_belief_by_search(&q(1, 2), &q(1, 2), &Event::full(6), o).unwrap());
            assert!(!m.common_belief_by_search(&q(1, 2), &q(1, 2), &Event::empty(6), o).unwrap());
        }
        let f = ev(m.space(), &["1", "2"]);
        assert!(m.common_belief_by_search(&one(), &q(1, 2), &f, 0).unwrap());
        assert!(!m.common_belief_by_search(&one(), &q(1, 2), &f, 2).unwrap());
    }

    #[test]
    fn search_rejects_large_spaces() {
        let s = FiniteProbSpace::uniform(labels(21)).unwrap();
        let m = EpistemicModel::new(s, vec!["a".into()], vec![AgentPartition::trivial(21)]).unwrap();
        assert_eq!(
            m.common_belief_by_search(&one(), &one(), &Event::full(21), 0),
            Err(Error::SpaceTooLarge { outcomes: 21, limit: SEARCH_LIMIT })
        );
    }

    #[test]
    fn hierarchy_can_exceed_search() {
        // Each of the two believers of F at 0 (and at 2) is a different pair of
        // agents, so no single two-agent coalition makes any event evident.
        let s = FiniteProbSpace::uniform(labels(3)).unwrap();
        let part = |cells: &[&[&str]]| {
            AgentPartition::new(3, cells.iter().map(|c| s.event(c).unwrap()).collect()).unwrap()
        };
        let parts = vec![
            part(&[&["1"], &["2", "3"]]),
            part(&[&["1", "3"], &["2"]]),
            part(&[&["1", "2"], &["3"]]),
        ];
        let m = EpistemicModel::new(s.clone(), vec!["a".into(), "b".into(), "c".into()], parts).unwrap();
        let (p, mu) = (q(3, 4), q(3, 8));
        let f = s.event(&["1", "3"]).unwrap();
        assert_eq!(m.common_belief_fixpoint(&p, &mu, &f), f);
        assert_eq!(m.common_belief_search_set(&p, &mu, &f).unwrap(), Event::empty(3));
        assert_eq!(m.common_belief_coalition(&p, &mu, &f), Event::empty(3));
        assert!(!m.is_evident_belief(&p, &mu, &f).evident);
    }

    #[test]
    fn search_and_coalition_agree_on_random_models() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let m = random_model(&mut rng, 5, 3);
            let p = random_grid_threshold(&mut rng);
            let mu = random_grid_threshold(&mut rng);
            let all = m.common_belief_search_all(&p, &mu).unwrap();
            for (fm, expected) in all.iter().enumerate() {
                let f = Event::from_mask(m.space().len(), fm as u64);
                assert_eq!(&m.common_belief_coalition(&p, &mu, &f), expected);
            }
        }
    }

    #[test]
    fn partition_validation() {
        let s = die();
        assert!(AgentPartition::new(6, vec![ev(&s, &["1", "2"])]).is_err());
        assert!(AgentPartition::new(6, vec![Event::full(6), ev(&s, &["1"])]).is_err());
        assert!(AgentPartition::new(6, vec![Event::full(6), Event::empty(6)]).is_err());
    }

    #[test]
    fn space_validation() {
        assert!(FiniteProbSpace::new(labels(2), vec![q(1, 2), q(1, 3)]).is_err());
        assert!(FiniteProbSpace::new(labels(2), vec![q(1, 1), q(0, 1)]).is_err());
        assert!(FiniteProbSpace::new(vec!["a".into(), "a".into()], vec![q(1, 2), q(1, 2)]).is_err());
    }
}
