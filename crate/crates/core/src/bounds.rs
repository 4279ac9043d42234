//! Closed-form probability bounds: Markov for non-candidates, Chernoff–Hoeffding
//! for independent type counts, the dependent (dependency-graph) variant for
//! candidate counts, and the high-degree state-detection bound.
//!
//! Irrational values are computed as [`Real`]s; anything above 1 is clamped
//! and marked vacuous.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Signed};

use crate::algorithms::candidate_fractions;
use crate::error::{invalid, Result};
use crate::graph::{ConcreteGraph, DegreeSequence};
use crate::hp::Real;
use crate::model::{AgentType, Prior};
use crate::rational::{format_rational, q, Q};

/// Tolerance for comparing bound values against measured data.
pub const DATA_TOLERANCE: f64 = 1e-15;

/// Failure probability used to turn the dependent bound into a deviation envelope.
pub fn default_envelope_delta() -> Q {
    q(1, 1000)
}

#[derive(Clone, Debug, PartialEq)]
pub enum BoundValue {
    Exact(Q),
    Approx(Real),
}

impl BoundValue {
    pub fn to_real(&self) -> Real {
        match self {
            BoundValue::Exact(x) => Real::from_q(x),
            BoundValue::Approx(r) => r.clone(),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            BoundValue::Exact(x) => crate::rational::to_f64(x),
            BoundValue::Approx(r) => r.to_f64(),
        }
    }

    /// Exact value as `num/den`, or `None` for irrational values.
    pub fn exact(&self) -> Option<String> {
        match self {
            BoundValue::Exact(x) => Some(format_rational(x)),
            BoundValue::Approx(_) => None,
        }
    }

    pub fn to_decimal(&self, digits: usize) -> String {
        match self {
            BoundValue::Exact(x) => crate::rational::to_decimal(x, digits),
            BoundValue::Approx(r) => r.to_decimal(digits),
        }
    }

    pub fn to_scientific(&self, sig: usize) -> String {
        self.to_real().to_scientific(sig)
    }
}

/// One evaluated bound with its named inputs.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundReport {
    pub name: String,
    /// Short statement of the inequality used.
    pub basis: String,
    pub inputs: Vec<(String, Q)>,
    /// Value after clamping to `[0, 1]`.
    pub value: BoundValue,
    /// Value before clamping.
    pub raw: BoundValue,
    /// The unclamped value exceeded 1.
    pub vacuous: bool,
}

impl BoundReport {
    fn new(name: &str, basis: &str, inputs: Vec<(&str, Q)>, raw: BoundValue) -> Self {
        let vacuous = match &raw {
            BoundValue::Exact(x) => *x > Q::one(),
            BoundValue::Approx(r) => r.cmp_q(&Q::one()) == Ordering::Greater,
        };
        let value = if vacuous { BoundValue::Exact(Q::one()) } else { raw.clone() };
        BoundReport {
            name: name.to_string(),
            basis: basis.to_string(),
            inputs: inputs.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
            value,
            raw,
            vacuous,
        }
    }

    pub fn input(&self, key: &str) -> Option<&Q> {
        self.inputs.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }
}

/// `Pr[X ≥ θn] ≤ E[X]/(θn)`, with `E[X] = expect·n`. Independent of `n`.
pub fn markov_noncandidate_bound(expect_per_agent: &Q, threshold_fraction: &Q, n: usize) -> Result<Q> {
    if !threshold_fraction.is_positive() {
        return Err(invalid("threshold_fraction", "must be positive"));
    }
    if expect_per_agent.is_negative() {
        return Err(invalid("expect_per_agent", "must be nonnegative"));
    }
    let n = Q::from_integer(BigInt::from(n));
    Ok((expect_per_agent * &n) / (threshold_fraction * &n))
}

pub fn markov_report(expect_per_agent: &Q, threshold_fraction: &Q, n: usize) -> Result<BoundReport> {
    let value = markov_noncandidate_bound(expect_per_agent, threshold_fraction, n)?;
    Ok(BoundReport::new(
        "markov_noncandidate",
        "Pr[X >= theta*n] <= E[X]/(theta*n)",
        alloc::vec![
            ("expect", expect_per_agent.clone()),
            ("theta", threshold_fraction.clone()),
            ("n", Q::from_integer(BigInt::from(n))),
        ],
        BoundValue::Exact(value),
    ))
}

/// Per-agent probability of being a non-candidate on a 4-regular graph:
/// `Pr[ν] + Pr[χ]·Pr[Bin(4, Pr[χ]) ≤ 1]` in `state`.
pub fn noncandidate_expectation_torus(prior: &Prior, state: &str) -> Result<Q> {
    prior.require_two_states()?;
    let s = prior.state_index(state)?;
    let chi = prior.type_prob(s, AgentType::Chi);
    let nu = prior.type_prob(s, AgentType::Nu);
    let miss = Q::one() - chi;
    let none = num_traits::pow(miss.clone(), 4);
    let one = q(4, 1) * chi * num_traits::pow(miss, 3);
    Ok(nu + chi * (none + one))
}

/// Expected non-candidate fraction `1 − e_s(C_C ∪ α)` for an arbitrary
/// degree sequence, the first state taken as the candidate state.
pub fn noncandidate_expectation(prior: &Prior, degseq: &DegreeSequence, state: &str) -> Result<Q> {
    prior.require_two_states()?;
    let s = prior.state_index(state)?;
    let fractions = candidate_fractions(degseq, prior, &[true, false])?;
    Ok(Q::one() - &fractions[s])
}

fn q_from(n: u64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// `exp(−2t²/(χ*·n))`.
pub fn dependent_chernoff(n: usize, t: &Q, chi_star: &Q) -> Result<Real> {
    if !t.is_positive() {
        return Err(invalid("t", "must be positive"));
    }
    if *chi_star < Q::one() {
        return Err(invalid("chi_star", "must be at least 1"));
    }
    if n == 0 {
        return Err(invalid("n", "must be positive"));
    }
    let exponent = -(q(2, 1) * t * t) / (chi_star * q_from(n as u64));
    Ok(Real::from_q(&exponent).exp())
}

pub fn dependent_chernoff_report(n: usize, t: &Q, chi_star: &Q) -> Result<BoundReport> {
    let value = dependent_chernoff(n, t, chi_star)?;
    Ok(BoundReport::new(
        "dependent_chernoff",
        "Pr[X <= E[X] - t] <= exp(-2t^2/(chi*·n))",
        alloc::vec![("n", q_from(n as u64)), ("t", t.clone()), ("chi_star", chi_star.clone())],
        BoundValue::Approx(value),
    ))
}

/// Two-sided Hoeffding for a sum of `n` independent indicators:
/// `2·exp(−2t²/n)`. Raw value, possibly above 1.
pub fn independent_chernoff(n: usize, t: &Q) -> Result<Real> {
    if !t.is_positive() {
        return Err(invalid("t", "must be positive"));
    }
    if n == 0 {
        return Err(invalid("n", "must be positive"));
    }
    let exponent = -(q(2, 1) * t * t) / q_from(n as u64);
    Ok(&Real::from_int(2) * &Real::from_q(&exponent).exp())
}

pub fn independent_chernoff_report(name: &str, n: usize, t: &Q) -> Result<BoundReport> {
    let value = independent_chernoff(n, t)?;
    Ok(BoundReport::new(
        name,
        "Pr[|X - E[X]| >= t] <= 2exp(-2t^2/n)",
        alloc::vec![("n", q_from(n as u64)), ("t", t.clone())],
        BoundValue::Approx(value),
    ))
}

/// Trivial colouring bound on the dependency graph of candidate indicators,
/// from the degree sequence alone: `d + d(d−1) + 1` with `d` the max degree.
pub fn dependency_chi_star_bound(degseq: &DegreeSequence) -> u64 {
    let d = degseq.max_degree() as u64;
    d + d * d.saturating_sub(1) + 1
}

/// Same bound from the actual graph: largest 2-ball (without centre) plus 1.
pub fn dependency_chi_star_bound_graph(graph: &ConcreteGraph) -> u64 {
    (0..graph.n()).map(|v| graph.two_ball(v).len() as u64).max().unwrap_or(0) + 1
}

/// `2·exp(−2(ε₀c)²·n^{1/3})`, the probability that a degree-`c·n^{1/3}`
/// agent's α-or-χ neighbour count strays by `ε₀·c·n^{1/3}`.
pub fn high_degree_state_bound(epsilon0: &Q, c: &Q, n: usize) -> Result<BoundReport> {
    if !epsilon0.is_positive() {
        return Err(invalid("epsilon0", "must be positive"));
    }
    if !c.is_positive() {
        return Err(invalid("c", "must be positive"));
    }
    if n == 0 {
        return Err(invalid("n", "must be positive"));
    }
    let ec = epsilon0 * c;
    let cube_root = Real::from_int(n as i64).cbrt();
    let exponent = &Real::from_q(&(-(q(2, 1) * &ec * &ec))) * &cube_root;
    let raw = &Real::from_int(2) * &exponent.exp();
    Ok(BoundReport::new(
        "high_degree_state",
        "Pr[|X - E[X]| >= eps0·c·n^(1/3)] <= 2exp(-2(eps0·c)^2·n^(1/3))",
        alloc::vec![("epsilon0", epsilon0.clone()), ("c", c.clone()), ("n", q_from(n as u64))],
        BoundValue::Approx(raw),
    ))
}

/// Whether a high-degree agent can tell the states apart from its count of
/// α-or-χ neighbours.
#[derive(Clone, Debug, PartialEq)]
pub struct Separation {
    /// `|e_A(χ∪α) − e_B(χ∪α)|`, the per-neighbour gap in expectations.
    pub gap: Q,
    /// `2ε₀`.
    pub required: Q,
    /// `gap·c·n^{1/3}` versus `2ε₀·c·n^{1/3}` — the degree factor cancels.
    pub expectation_gap: Real,
    pub required_gap: Real,
    pub admissible: bool,
}

pub fn separation_check(prior: &Prior, epsilon0: &Q, c: &Q, n: usize) -> Result<Separation> {
    prior.require_two_states()?;
    if !epsilon0.is_positive() || !c.is_positive() {
        return Err(invalid("epsilon0", "epsilon0 and c must be positive"));
    }
    let both = [AgentType::Chi, AgentType::Alpha];
    let a = prior.state(0).types.mass(&both);
    let b = prior.state(1).types.mass(&both);
    let gap = (a - b).abs();
    let required = q(2, 1) * epsilon0;
    let degree = &Real::from_q(c) * &Real::from_int(n as i64).cbrt();
    Ok(Separation {
        expectation_gap: &Real::from_q(&gap) * &degree,
        required_gap: &Real::from_q(&required) * &degree,
        admissible: gap > required,
        gap,
        required,
    })
}

/// Deviation `t` at which the dependent bound equals `δ`, two-sided:
/// `sqrt(χ*·n·ln(2/δ)/2)`.
pub fn chernoff_envelope(n: usize, chi_star: &Q, delta: &Q) -> Result<Real> {
    if !delta.is_positive() || *delta >= Q::one() {
        return Err(invalid("delta", "must lie in (0, 1)"));
    }
    if *chi_star < Q::one() {
        return Err(invalid("chi_star", "must be at least 1"));
    }
    let log = Real::from_q(&(q(2, 1) / delta)).ln().expect("2/δ > 0");
    let inner = &(&Real::from_q(&(chi_star * q_from(n as u64))) * &log) / &Real::from_int(2);
    Ok(inner.sqrt().expect("nonnegative"))
}

/// Inputs for [`bounds_table`].
#[derive(Clone, Debug)]
pub struct BoundsQuery<'a> {
    pub prior: &'a Prior,
    pub degseq: &'a DegreeSequence,
    /// Relative deviation for the Chernoff entries.
    pub epsilon: Q,
    /// Optional high-degree parameters `(ε₀, c)`.
    pub high_degree: Option<(Q, Q)>,
}

/// Every bound that applies to `prior` on `degseq`, one row each.
///
/// Markov rows use threshold `1 − μ`: the revolt at the first state fails
/// only if non-candidates exceed that fraction.
pub fn bounds_table(query: &BoundsQuery<'_>) -> Result<Vec<BoundReport>> {
    let prior = query.prior;
    prior.require_two_states()?;
    if !query.epsilon.is_positive() {
        return Err(invalid("epsilon", "must be positive"));
    }
    let n = query.degseq.len();
    let nq = q_from(n as u64);
    let names = prior.state_names();
    let mut rows = Vec::new();
    let threshold = Q::one() - prior.mu();
    let chi_star = q_from(dependency_chi_star_bound(query.degseq));
    let fractions = candidate_fractions(query.degseq, prior, &[true, false])?;
    for (s, name) in names.iter().enumerate() {
        let expect = Q::one() - &fractions[s];
        if threshold.is_positive() {
            let mut row = markov_report(&expect, &threshold, n)?;
            row.name = alloc::format!("markov_noncandidate[{name}]");
            rows.push(row);
        }
        // Candidate count (α included) falling ε-relatively below its mean.
        let mean = &fractions[s] * &nq;
        if mean.is_positive() {
            let t = &query.epsilon * &mean;
            let mut row = dependent_chernoff_report(n, &t, &chi_star)?;
            row.name = alloc::format!("dependent_chernoff[{name}]");
            rows.push(row);
        }
        for (label, t) in [("alpha", AgentType::Alpha), ("chi", AgentType::Chi)] {
            let mean = prior.type_prob(s, t) * &nq;
            if mean.is_positive() {
                let dev = &query.epsilon * &mean;
                rows.push(independent_chernoff_report(&alloc::format!("independent_chernoff[{name},{label}]"), n, &dev)?);
            }
        }
    }
    if let Some((epsilon0, c)) = &query.high_degree {
        rows.push(high_degree_state_bound(epsilon0, c, n)?);
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::ConcreteGraph;
    use crate::model::tests::motivating_prior;
    use crate::model::enumerate_contexts;
    use crate::netgen::torus_grid;
    use num_traits::Zero;

    #[test]
    fn motivating_markov_numbers() {
        let prior = motivating_prior();
        let e = noncandidate_expectation_torus(&prior, "A").unwrap();
        assert_eq!(e, q(693, 3125));
        let m = markov_noncandidate_bound(&e, &q(1, 2), 1000).unwrap();
        assert_eq!(m, q(1386, 3125));
        assert_eq!(Q::one() - m, q(1739, 3125));
        assert_eq!(markov_noncandidate_bound(&Q::zero(), &q(1, 2), 7).unwrap(), Q::zero());
        assert!(markov_noncandidate_bound(&e, &Q::zero(), 7).is_err());
    }

    #[test]
    fn torus_expectation_matches_context_mass() {
        // Oracle: sum the likelihoods of ν contexts and χ contexts with
        // at most one χ-neighbour, and compare with the generic routine.
        let prior = motivating_prior();
        let four = DegreeSequence::constant(100, 4).unwrap();
        for (s, name) in ["A", "B"].iter().enumerate() {
            let closed = noncandidate_expectation_torus(&prior, name).unwrap();
            let mut mass = Q::zero();
            for c in enumerate_contexts(4, None) {
                let low_chi = c.own_type == AgentType::Chi && c.count(AgentType::Chi) <= 1;
                if c.own_type == AgentType::Nu || low_chi {
                    mass += crate::model::context_likelihood_at(&c, s, &prior);
                }
            }
            assert_eq!(closed, mass, "state {name}");
            assert_eq!(closed, noncandidate_expectation(&prior, &four, name).unwrap());
        }
        assert_eq!(noncandidate_expectation_torus(&prior, "B").unwrap(), q(3012, 3125));
    }

    #[test]
    fn all_chi_state_has_no_low_chi_mass() {
        use crate::model::{StateSpec, TypeDistribution};
        let prior = Prior::new(
            q(1, 2),
            q(1, 2),
            alloc::vec![
                StateSpec {
                    name: "A".into(),
                    prob: q(1, 2),
                    types: TypeDistribution::new(Q::zero(), Q::one(), Q::zero()).unwrap(),
                },
                StateSpec {
                    name: "B".into(),
                    prob: q(1, 2),
                    types: TypeDistribution::new(Q::zero(), q(1, 2), q(1, 2)).unwrap(),
                },
            ],
        )
        .unwrap();
        assert_eq!(noncandidate_expectation_torus(&prior, "A").unwrap(), Q::zero());
    }

    #[test]
    fn dependent_chernoff_examples() {
        let v = dependent_chernoff(1000, &q(100, 1), &q(10, 1)).unwrap();
        assert_eq!(v.to_decimal(5), "0.13534");
        let tiny = dependent_chernoff(1000, &q(1, 1_000_000), &q(10, 1)).unwrap();
        assert_eq!(tiny.to_decimal(9), "1.000000000");
        // χ* = 1 is the one-sided Hoeffding form, half the two-sided one.
        let dep = dependent_chernoff(50, &q(5, 1), &Q::one()).unwrap();
        let ind = independent_chernoff(50, &q(5, 1)).unwrap();
        assert_eq!(&dep * &Real::from_int(2), ind);
        assert!(dependent_chernoff(10, &Q::zero(), &Q::one()).is_err());
        assert!(dependent_chernoff(10, &Q::one(), &q(1, 2)).is_err());
    }

    #[test]
    fn chi_star_bounds() {
        assert_eq!(dependency_chi_star_bound(&DegreeSequence::constant(9, 4).unwrap()), 17);
        assert_eq!(dependency_chi_star_bound(&DegreeSequence::constant(2, 1).unwrap()), 2);
        assert_eq!(dependency_chi_star_bound_graph(&torus_grid(25, 40).unwrap()), 13);
        let star = ConcreteGraph::from_edges(6, &[(0, 1), (0, 2), (0, 3), (0, 4), (0, 5)]).unwrap();
        assert_eq!(dependency_chi_star_bound_graph(&star), 6);
    }

    #[test]
    fn high_degree_bound_clamps() {
        let r = high_degree_state_bound(&q(1, 10), &Q::one(), 1000).unwrap();
        assert!(r.vacuous);
        assert_eq!(r.value, BoundValue::Exact(Q::one()));
        assert_eq!(r.raw.to_decimal(3), "1.637");
        let r = high_degree_state_bound(&q(1, 2), &q(2, 1), 1_000_000).unwrap();
        assert!(!r.vacuous);
        let expected = &Real::from_int(2) * &Real::from_int(-200).exp();
        let diff = (&r.raw.to_real() - &expected).abs();
        assert!(diff.cmp_q(&q(1, 1)) == Ordering::Less && diff.to_f64() < 1e-85);
    }

    #[test]
    fn separation_uses_alpha_or_chi_gap() {
        let prior = motivating_prior();
        // e_A(χ∪α) = 4/5, e_B(χ∪α) = 1/5.
        let s = separation_check(&prior, &q(1, 4), &Q::one(), 1000).unwrap();
        assert_eq!(s.gap, q(3, 5));
        assert!(s.admissible);
        assert_eq!(s.expectation_gap.to_decimal(10), "6.0000000000");
        assert!(!separation_check(&prior, &q(3, 10), &Q::one(), 1000).unwrap().admissible);
    }

    #[test]
    fn envelope_inverts_bound() {
        let chi = q(13, 1);
        let t = chernoff_envelope(1000, &chi, &q(1, 1000)).unwrap();
        let x = t.to_f64();
        let v = 2.0 * libm::exp(-2.0 * x * x / (13.0 * 1000.0));
        assert!((v - 1e-3).abs() < 1e-12);
    }

    #[test]
    fn table_covers_both_states() {
        let prior = motivating_prior();
        let degseq = DegreeSequence::constant(1000, 4).unwrap();
        let rows = bounds_table(&BoundsQuery {
            prior: &prior,
            degseq: &degseq,
            epsilon: q(1, 10),
            high_degree: Some((q(1, 10), Q::one())),
        })
        .unwrap();
        let markov = rows.iter().find(|r| r.name == "markov_noncandidate[A]").unwrap();
        assert_eq!(markov.value, BoundValue::Exact(q(1386, 3125)));
        assert!(rows.iter().any(|r| r.name == "dependent_chernoff[B]"));
        assert!(rows.iter().all(|r| r.value.to_real().cmp_q(&Q::one()) != Ordering::Greater));
        assert!(rows.last().unwrap().vacuous);
    }
}
