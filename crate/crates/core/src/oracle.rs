//! Exhaustive ground truth on small concrete graphs.
//!
//! Every `(state, type assignment)` realization is enumerated. A strategy is a
//! set of *local views* — a vertex together with its own type and the types
//! of its neighbours in adjacency order — whose χ occupants revolt. Because
//! the graph is common knowledge, views are positional: two vertices with the
//! same neighbour-type counts are still different views.
//!
//! The best response of a χ agent is to revolt iff
//! `Pr[|R| ≥ μ·n | view] ≥ p`. This map is monotone in the revolting set, so
//! the greatest and least fixpoints exist and are reached by batch
//! removal/addition.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{invalid, Error, Result};
use crate::graph::ConcreteGraph;
use crate::model::{AgentType, ContextClass, Prior, StateSpec, TypeDistribution};
use crate::rational::{q, Q};

/// Default limit on `states × 3^n` realizations.
pub const DEFAULT_BUDGET: u128 = 2 * 59_049;

/// A vertex together with the types it observes.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LocalView {
    pub vertex: usize,
    pub own_type: AgentType,
    /// Types of the neighbours, in the graph's adjacency order.
    pub neighbor_types: Vec<AgentType>,
}

impl LocalView {
    pub fn context(&self) -> ContextClass {
        let mut counts = [0u32; 3];
        for t in &self.neighbor_types {
            counts[t.index()] += 1;
        }
        ContextClass::new(self.own_type, counts[0], counts[1], counts[2])
    }
}

/// Which positive-probability views revolt. α views always do, ν views never.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrategyProfile {
    pub views: Vec<LocalView>,
    pub revolts: Vec<bool>,
}

impl StrategyProfile {
    pub fn revolting(&self) -> impl Iterator<Item = &LocalView> {
        self.views.iter().zip(&self.revolts).filter(|(_, &r)| r).map(|(v, _)| v)
    }

    pub fn revolting_chi(&self) -> impl Iterator<Item = &LocalView> {
        self.revolting().filter(|v| v.own_type == AgentType::Chi)
    }

    pub fn is_revolting(&self, view: &LocalView) -> bool {
        self.views
            .iter()
            .position(|v| v == view)
            .is_some_and(|i| self.revolts[i])
    }

    /// Revolting χ views ⊆ those of `other`.
    pub fn is_subset(&self, other: &StrategyProfile) -> bool {
        self.revolts
            .iter()
            .zip(&other.revolts)
            .all(|(&a, &b)| !a || b)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Equilibrium {
    pub profile: StrategyProfile,
    /// Number of χ views flipped in each round.
    pub changes_per_round: Vec<usize>,
    /// Every revolting χ view meets `p` and every other χ view falls short.
    pub verified: bool,
}

/// The enumerated realizations of one graph under one prior.
pub struct Oracle {
    graph: ConcreteGraph,
    prior: Prior,
    n: usize,
    views: Vec<LocalView>,
    /// Per positive-probability assignment: the type of each vertex.
    types: Vec<AgentType>,
    /// Per assignment and vertex: index into `views`.
    view_of: Vec<u32>,
    /// `Pr[assignment] = joint / joint_den`.
    joint: Vec<BigInt>,
    joint_den: BigInt,
    /// `Pr[assignment | s] = per_state[s] / state_den[s]`.
    per_state: Vec<Vec<BigInt>>,
    state_den: Vec<BigInt>,
    /// `Pr[view]`, on `joint_den`.
    view_mass: Vec<BigInt>,
}

impl Oracle {
    pub fn new(graph: &ConcreteGraph, prior: &Prior) -> Result<Self> {
        Self::with_budget(graph, prior, DEFAULT_BUDGET)
    }

    pub fn with_budget(graph: &ConcreteGraph, prior: &Prior, budget: u128) -> Result<Self> {
        let n = graph.n();
        if n == 0 {
            return Err(invalid("graph", "graph has no vertices"));
        }
        let m = prior.num_states();
        let cost = 3u128
            .checked_pow(n as u32)
            .and_then(|r| r.checked_mul(m as u128))
            .unwrap_or(u128::MAX);
        if cost > budget {
            return Err(Error::BudgetExceeded { cost, budget });
        }
        // Type probabilities as integers over a per-state denominator.
        let mut numer = Vec::with_capacity(m);
        let mut den = Vec::with_capacity(m);
        for s in 0..m {
            let d = AgentType::ALL
                .iter()
                .fold(BigInt::one(), |acc, &t| acc.lcm(prior.type_prob(s, t).denom()));
            numer.push(
                AgentType::ALL
                    .iter()
                    .map(|&t| {
                        let x = prior.type_prob(s, t);
                        x.numer() * (&d / x.denom())
                    })
                    .collect::<Vec<_>>(),
            );
            den.push(d);
        }
        let state_den: Vec<BigInt> = den.iter().map(|d| num_traits::pow(d.clone(), n)).collect();
        let scaled: Vec<BigInt> = (0..m).map(|s| prior.state(s).prob.denom() * &state_den[s]).collect();
        let joint_den = scaled.iter().fold(BigInt::one(), |acc, d| acc.lcm(d));
        let factor: Vec<BigInt> = (0..m)
            .map(|s| prior.state(s).prob.numer() * (&joint_den / &scaled[s]))
            .collect();

        let total = 3usize.pow(n as u32);
        let mut view_index: BTreeMap<(usize, Vec<AgentType>), u32> = BTreeMap::new();
        let mut views = Vec::new();
        let mut types = Vec::new();
        let mut view_of = Vec::new();
        let mut joint = Vec::new();
        let mut per_state: Vec<Vec<BigInt>> = vec![Vec::new(); m];
        let mut assignment = vec![AgentType::Alpha; n];
        for code in 0..total {
            let mut c = code;
            for slot in assignment.iter_mut() {
                *slot = AgentType::ALL[c % 3];
                c /= 3;
            }
            let ws: Vec<BigInt> = (0..m)
                .map(|s| {
                    assignment
                        .iter()
                        .fold(BigInt::one(), |acc, t| acc * &numer[s][t.index()])
                })
                .collect();
            let j: BigInt = ws.iter().zip(&factor).map(|(w, f)| w * f).sum();
            if j.is_zero() {
                continue;
            }
            for v in 0..n {
                let mut key_types = Vec::with_capacity(graph.degree(v) + 1);
                key_types.push(assignment[v]);
                key_types.extend(graph.neighbors(v).iter().map(|&u| assignment[u]));
                let next = views.len() as u32;
                let idx = *view_index.entry((v, key_types.clone())).or_insert_with(|| {
                    views.push(LocalView {
                        vertex: v,
                        own_type: key_types[0],
                        neighbor_types: key_types[1..].to_vec(),
                    });
                    next
                });
                view_of.push(idx);
            }
            types.extend_from_slice(&assignment);
            joint.push(j);
            for (s, w) in ws.into_iter().enumerate() {
                per_state[s].push(w);
            }
        }
        let mut view_mass = vec![BigInt::zero(); views.len()];
        for (a, j) in joint.iter().enumerate() {
            for &vi in &view_of[a * n..(a + 1) * n] {
                view_mass[vi as usize] += j;
            }
        }
        Ok(Oracle {
            graph: graph.clone(),
            prior: prior.clone(),
            n,
            views,
            types,
            view_of,
            joint,
            joint_den,
            per_state,
            state_den,
            view_mass,
        })
    }

    pub fn graph(&self) -> &ConcreteGraph {
        &self.graph
    }

    pub fn prior(&self) -> &Prior {
        &self.prior
    }

    pub fn num_views(&self) -> usize {
        self.views.len()
    }

    fn assignments(&self) -> usize {
        self.joint.len()
    }

    fn initial_profile(&self, chi_revolts: bool) -> StrategyProfile {
        StrategyProfile {
            views: self.views.clone(),
            revolts: self
                .views
                .iter()
                .map(|v| match v.own_type {
                    AgentType::Alpha => true,
                    AgentType::Chi => chi_revolts,
                    AgentType::Nu => false,
                })
                .collect(),
        }
    }

    fn revolt_size(&self, revolts: &[bool], a: usize) -> usize {
        self.view_of[a * self.n..(a + 1) * self.n]
            .iter()
            .filter(|&&vi| revolts[vi as usize])
            .count()
    }

    fn reaches(&self, size: usize, fraction: &Q) -> bool {
        BigInt::from(size) * fraction.denom() >= fraction.numer() * BigInt::from(self.n)
    }

    /// Numerators of `Pr[|R| ≥ μn ∧ view]` on `joint_den`, per view.
    fn success_mass(&self, revolts: &[bool]) -> Vec<BigInt> {
        let mu = self.prior.mu();
        let mut mass = vec![BigInt::zero(); self.views.len()];
        for a in 0..self.assignments() {
            if self.reaches(self.revolt_size(revolts, a), mu) {
                for &vi in &self.view_of[a * self.n..(a + 1) * self.n] {
                    mass[vi as usize] += &self.joint[a];
                }
            }
        }
        mass
    }

    fn meets(&self, success: &BigInt, view: usize) -> bool {
        let p = self.prior.p();
        success * p.denom() >= p.numer() * &self.view_mass[view]
    }

    /// `Pr[|R| ≥ μn | view]` under the profile.
    pub fn success_probability(&self, profile: &StrategyProfile, view: &LocalView) -> Option<Q> {
        let i = self.views.iter().position(|v| v == view)?;
        let success = self.success_mass(&profile.revolts);
        Some(Q::new(success[i].clone(), self.view_mass[i].clone()))
    }

    fn verify(&self, revolts: &[bool]) -> bool {
        let success = self.success_mass(revolts);
        self.views.iter().enumerate().all(|(i, v)| match v.own_type {
            AgentType::Chi => revolts[i] == self.meets(&success[i], i),
            AgentType::Alpha => revolts[i],
            AgentType::Nu => !revolts[i],
        })
    }

    fn iterate(&self, greatest: bool) -> Equilibrium {
        let mut profile = self.initial_profile(greatest);
        let mut changes_per_round = Vec::new();
        loop {
            let success = self.success_mass(&profile.revolts);
            let mut changed = 0;
            for (i, v) in self.views.iter().enumerate() {
                if v.own_type != AgentType::Chi || profile.revolts[i] != greatest {
                    continue;
                }
                if self.meets(&success[i], i) != greatest {
                    profile.revolts[i] = !greatest;
                    changed += 1;
                }
            }
            if changed == 0 {
                break;
            }
            changes_per_round.push(changed);
        }
        let verified = self.verify(&profile.revolts);
        Equilibrium {
            profile,
            changes_per_round,
            verified,
        }
    }

    /// Start with every χ view revolting and drop those whose threshold fails.
    pub fn greatest_equilibrium(&self) -> Equilibrium {
        self.iterate(true)
    }

    /// Start with only α revolting and add χ views whose threshold is met.
    pub fn least_equilibrium(&self) -> Equilibrium {
        self.iterate(false)
    }

    /// Ex ante `Pr[|R| ≥ μ*·n]` under the profile.
    pub fn revolt_probability(&self, profile: &StrategyProfile, mu_star: &Q) -> Q {
        let mut total = BigInt::zero();
        for a in 0..self.assignments() {
            if self.reaches(self.revolt_size(&profile.revolts, a), mu_star) {
                total += &self.joint[a];
            }
        }
        Q::new(total, self.joint_den.clone())
    }

    /// `E[|R| / n | state]` under the profile.
    pub fn expected_revolt_fraction(&self, profile: &StrategyProfile, state: usize) -> Q {
        let mut total = BigInt::zero();
        for a in 0..self.assignments() {
            let size = self.revolt_size(&profile.revolts, a);
            total += &self.per_state[state][a] * BigInt::from(size);
        }
        Q::new(total, &self.state_den[state] * BigInt::from(self.n))
    }

    /// Vertex types of the `a`-th positive-probability assignment.
    pub fn assignment_types(&self, a: usize) -> &[AgentType] {
        &self.types[a * self.n..(a + 1) * self.n]
    }
}

pub fn greatest_equilibrium(graph: &ConcreteGraph, prior: &Prior) -> Result<Equilibrium> {
    Ok(Oracle::new(graph, prior)?.greatest_equilibrium())
}

pub fn least_equilibrium(graph: &ConcreteGraph, prior: &Prior) -> Result<Equilibrium> {
    Ok(Oracle::new(graph, prior)?.least_equilibrium())
}

/// A concrete revolt question: is a revolt of size `μ*·n` supported with
/// probability at least `q*`?
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RevoltInstance {
    pub graph: ConcreteGraph,
    pub prior: Prior,
    pub mu_star: Q,
    pub q_star: Q,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RevoltDecision {
    pub supported: bool,
    pub probability: Q,
    pub equilibrium: Equilibrium,
}

pub fn revolt_decision(inst: &RevoltInstance) -> Result<RevoltDecision> {
    revolt_decision_with_budget(inst, DEFAULT_BUDGET)
}

pub fn revolt_decision_with_budget(inst: &RevoltInstance, budget: u128) -> Result<RevoltDecision> {
    let oracle = Oracle::with_budget(&inst.graph, &inst.prior, budget)?;
    let equilibrium = oracle.greatest_equilibrium();
    let probability = oracle.revolt_probability(&equilibrium.profile, &inst.mu_star);
    Ok(RevoltDecision {
        supported: probability >= inst.q_star,
        probability,
        equilibrium,
    })
}

/// The revolt instance that has a yes answer iff the graph has a `k`-clique:
/// `p = 1`, `μ = μ* = k/n`, `q* = 0.99^k / 2`; state `A` draws χ with
/// probability 99/100 and ν otherwise, state `B` draws only ν; both states
/// equally likely.
pub fn clique_reduction(graph: &ConcreteGraph, k: usize) -> Result<RevoltInstance> {
    let n = graph.n();
    if k == 0 || k > n {
        return Err(invalid("k", alloc::format!("must lie in 1..={n}")));
    }
    let frac = q(k as i64, n as i64);
    let prior = Prior::new(
        Q::one(),
        frac.clone(),
        vec![
            StateSpec {
                name: "A".into(),
                prob: q(1, 2),
                types: TypeDistribution::new(q(0, 1), q(99, 100), q(1, 100))?,
            },
            StateSpec {
                name: "B".into(),
                prob: q(1, 2),
                types: TypeDistribution::new(q(0, 1), q(0, 1), q(1, 1))?,
            },
        ],
    )?;
    let q_star = num_traits::pow(q(99, 100), k) / q(2, 1);
    Ok(RevoltInstance {
        graph: graph.clone(),
        prior,
        mu_star: frac,
        q_star,
    })
}

/// Largest graph accepted by [`clique_exists`].
pub const CLIQUE_LIMIT: usize = 20;

/// Exhaustive `k`-subset scan.
pub fn clique_exists(graph: &ConcreteGraph, k: usize) -> Result<bool> {
    let n = graph.n();
    if n > CLIQUE_LIMIT {
        return Err(invalid("graph", alloc::format!("clique scan is limited to {CLIQUE_LIMIT} vertices")));
    }
    if k == 0 {
        return Ok(true);
    }
    if k > n {
        return Ok(false);
    }
    let adj: Vec<u32> = (0..n)
        .map(|v| graph.neighbors(v).iter().fold(0u32, |m, &u| m | 1 << u))
        .collect();
    Ok((0u32..1 << n).any(|set| {
        set.count_ones() as usize == k
            && (0..n)
                .filter(|&v| set >> v & 1 == 1)
                .all(|v| set & !(1 << v) & !adj[v] == 0)
    }))
}

/// One representative of every isomorphism class of graphs on `n ≤ 7`
/// vertices, each the lexicographically smallest edge mask among relabelings
/// with non-increasing degrees.
pub fn nonisomorphic_graphs(n: usize) -> Result<Vec<ConcreteGraph>> {
    if n > 7 {
        return Err(invalid("n", "catalog is limited to 7 vertices"));
    }
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let pair_bit = |u: usize, v: usize| {
        let (a, b) = if u < v { (u, v) } else { (v, u) };
        pairs.iter().position(|&p| p == (a, b)).expect("pair exists")
    };
    let perms = permutations(n);
    // bit_map[π][e] = bit of edge e after relabeling by π
    let bit_map: Vec<Vec<usize>> = perms
        .iter()
        .map(|pi| pairs.iter().map(|&(u, v)| pair_bit(pi[u], pi[v])).collect())
        .collect();
    let mut seen = BTreeSet::new();
    for mask in 0u64..1 << pairs.len() {
        let mut degree = vec![0u32; n];
        for (e, &(u, v)) in pairs.iter().enumerate() {
            if mask >> e & 1 == 1 {
                degree[u] += 1;
                degree[v] += 1;
            }
        }
        if degree.windows(2).any(|w| w[0] < w[1]) {
            continue;
        }
        let mut best = u64::MAX;
        for (pi, map) in perms.iter().zip(&bit_map) {
            // vertex u moves to pi[u]; keep degrees non-increasing
            let mut moved = vec![0u32; n];
            for u in 0..n {
                moved[pi[u]] = degree[u];
            }
            if moved.windows(2).any(|w| w[0] < w[1]) {
                continue;
            }
            let image = (0..pairs.len())
                .filter(|&e| mask >> e & 1 == 1)
                .fold(0u64, |acc, e| acc | 1 << map[e]);
            best = best.min(image);
        }
        seen.insert(best);
    }
    seen.into_iter()
        .map(|mask| {
            let edges: Vec<(usize, usize)> = pairs
                .iter()
                .enumerate()
                .filter(|&(e, _)| mask >> e & 1 == 1)
                .map(|(_, &p)| p)
                .collect();
            ConcreteGraph::from_edges(n, &edges)
        })
        .collect()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = (0..n).collect();
    fn rec(k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == cur.len() {
            out.push(cur.clone());
            return;
        }
        for i in k..cur.len() {
            cur.swap(k, i);
            rec(k + 1, cur, out);
            cur.swap(k, i);
        }
    }
    rec(0, &mut current, &mut out);
    out
}
