//! Seeded random networks, graphicality and realization.
//!
//! All randomness comes from ChaCha8 (`rand_chacha::ChaCha8Rng`) seeded with a
//! single `u64`. Derived seeds for trials and sweep points come from
//! [`derive_seed`].

use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Error, Result};
use crate::graph::{ConcreteGraph, DegreeSequence};
use crate::rational::{to_f64, Q};

/// Attempts made by [`powerlaw_sequence`] before giving up.
pub const POWERLAW_ATTEMPTS: u32 = 10_000;

/// Double-edge swaps per edge in [`realize_graph`].
pub const SWAPS_PER_EDGE: usize = 10;

fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// `splitmix64(splitmix64(splitmix64(master) ^ stream) ^ counter)`.
pub fn derive_seed(master: u64, stream: u64, counter: u64) -> u64 {
    splitmix64(splitmix64(splitmix64(master) ^ stream) ^ counter)
}

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Family {
    Constant { d: u32 },
    PowerLaw { gamma: Q },
    BarabasiAlbert { m: usize },
    ErdosRenyi { p_edge: Q },
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Constant { .. } => "constant",
            Family::PowerLaw { .. } => "powerlaw",
            Family::BarabasiAlbert { .. } => "ba",
            Family::ErdosRenyi { .. } => "er",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenSpec {
    pub family: Family,
    pub n: usize,
    pub seed: u64,
}

impl GenSpec {
    pub fn sequence(&self) -> Result<DegreeSequence> {
        match &self.family {
            Family::Constant { d } => constant_sequence(self.n, *d),
            Family::PowerLaw { gamma } => powerlaw_sequence(self.n, gamma, self.seed),
            Family::BarabasiAlbert { m } => ba_sequence(self.n, *m, self.seed),
            Family::ErdosRenyi { p_edge } => er_sequence(self.n, p_edge, self.seed),
        }
    }

    /// A concrete graph. Constant and power-law sequences are realized with
    /// [`realize_graph`] using the same seed.
    pub fn graph(&self) -> Result<ConcreteGraph> {
        match &self.family {
            Family::BarabasiAlbert { m } => ba_graph(self.n, *m, self.seed),
            Family::ErdosRenyi { p_edge } => er_graph(self.n, p_edge, self.seed),
            _ => realize_graph(&self.sequence()?, self.seed),
        }
    }
}

/// `n` copies of `d`.
pub fn constant_sequence(n: usize, d: u32) -> Result<DegreeSequence> {
    if n == 0 {
        return Err(invalid("n", "must be at least 1"));
    }
    if d as usize >= n {
        return Err(invalid("d", alloc::format!("degree {d} needs d < n = {n}")));
    }
    if (n as u64 * d as u64) % 2 == 1 {
        return Err(Error::NotGraphical(alloc::format!("n·d = {} is odd", n as u64 * d as u64)));
    }
    DegreeSequence::constant(n, d)
}

/// The degree law `Pr[d] ∝ d^{−γ}` on `1..=max`.
#[derive(Debug, Clone)]
pub struct PowerLaw {
    cdf: Vec<f64>,
}

impl PowerLaw {
    pub fn new(gamma: &Q, max: u32) -> Result<Self> {
        if *gamma <= Q::from_integer(1.into()) {
            return Err(invalid("gamma", "must exceed 1"));
        }
        if max == 0 {
            return Err(invalid("n", "power-law sequences need n ≥ 2"));
        }
        let g = to_f64(gamma);
        let weights: Vec<f64> = (1..=max).map(|d| libm::pow(d as f64, -g)).collect();
        let total: f64 = weights.iter().sum();
        let mut acc = 0.0;
        let cdf = weights
            .iter()
            .map(|w| {
                acc += w / total;
                acc
            })
            .collect();
        Ok(PowerLaw { cdf })
    }

    /// `Pr[d]` for `d ≥ 1`.
    pub fn pmf(&self, d: u32) -> f64 {
        let i = d as usize;
        match i {
            0 => 0.0,
            1 => self.cdf[0],
            _ if i <= self.cdf.len() => self.cdf[i - 1] - self.cdf[i - 2],
            _ => 0.0,
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u32 {
        let u: f64 = rng.gen();
        let i = self.cdf.partition_point(|&c| c <= u);
        (i.min(self.cdf.len() - 1) + 1) as u32
    }
}

/// Power-law sequence together with the number of whole-sequence draws it
/// took to obtain a graphical one.
pub fn powerlaw_sequence_attempts(n: usize, gamma: &Q, seed: u64) -> Result<(DegreeSequence, u32)> {
    if n < 2 {
        return Err(invalid("n", "power-law sequences need n ≥ 2"));
    }
    let law = PowerLaw::new(gamma, (n - 1) as u32)?;
    let mut rng = rng_from_seed(seed);
    for attempt in 1..=POWERLAW_ATTEMPTS {
        let degrees: Vec<u32> = (0..n).map(|_| law.sample(&mut rng)).collect();
        let seq = DegreeSequence::new(degrees)?;
        if is_graphical(&seq) {
            return Ok((seq, attempt));
        }
    }
    Err(Error::AttemptCapExceeded {
        attempts: POWERLAW_ATTEMPTS,
    })
}

/// `n` i.i.d. draws from `Pr[d] ∝ d^{−γ}` on `1..=n−1`, redrawn as a whole
/// until graphical.
pub fn powerlaw_sequence(n: usize, gamma: &Q, seed: u64) -> Result<DegreeSequence> {
    powerlaw_sequence_attempts(n, gamma, seed).map(|(s, _)| s)
}

/// Preferential attachment: `m` isolated seed vertices; the first arrival
/// links to all of them; every later arrival draws `m` distinct targets with
/// probability proportional to degree (uniform draws from the list of edge
/// endpoints, duplicates rejected). The graph has `m·(n − m)` edges.
pub fn ba_graph(n: usize, m: usize, seed: u64) -> Result<ConcreteGraph> {
    if m == 0 || m >= n {
        return Err(invalid("m", alloc::format!("need 1 ≤ m < n = {n}")));
    }
    let mut rng = rng_from_seed(seed);
    let mut g = ConcreteGraph::empty(n);
    let mut endpoints: Vec<usize> = Vec::with_capacity(2 * m * (n - m));
    for t in 0..m {
        g.add_edge(m, t);
        endpoints.push(m);
        endpoints.push(t);
    }
    let mut targets = Vec::with_capacity(m);
    for v in m + 1..n {
        targets.clear();
        while targets.len() < m {
            let u = endpoints[rng.gen_range(0..endpoints.len())];
            if !targets.contains(&u) {
                targets.push(u);
            }
        }
        for &u in &targets {
            g.add_edge(v, u);
            endpoints.push(v);
            endpoints.push(u);
        }
    }
    Ok(g)
}

pub fn ba_sequence(n: usize, m: usize, seed: u64) -> Result<DegreeSequence> {
    ba_graph(n, m, seed)?.degree_sequence()
}

/// Each of the `n(n−1)/2` pairs is an edge independently with probability
/// `p_edge`. Pairs are visited with geometric skips, so the cost is
/// proportional to the number of edges.
pub fn er_graph(n: usize, p_edge: &Q, seed: u64) -> Result<ConcreteGraph> {
    if n == 0 {
        return Err(invalid("n", "must be at least 1"));
    }
    if *p_edge < Q::from_integer(0.into()) || *p_edge > Q::from_integer(1.into()) {
        return Err(invalid("p_edge", "must lie in [0, 1]"));
    }
    let mut g = ConcreteGraph::empty(n);
    let p = to_f64(p_edge);
    if p <= 0.0 {
        return Ok(g);
    }
    if p >= 1.0 {
        return Ok(ConcreteGraph::complete(n));
    }
    let mut rng = rng_from_seed(seed);
    let log_q = libm::log(1.0 - p);
    // Pairs (v, w) with w < v, enumerated row by row.
    let (mut v, mut w) = (1usize, -1i64);
    while v < n {
        let r: f64 = rng.gen();
        let skip = libm::floor(libm::log(1.0 - r) / log_q) as i64;
        w += 1 + skip;
        while v < n && w >= v as i64 {
            w -= v as i64;
            v += 1;
        }
        if v < n {
            g.add_edge(v, w as usize);
        }
    }
    Ok(g)
}

pub fn er_sequence(n: usize, p_edge: &Q, seed: u64) -> Result<DegreeSequence> {
    er_graph(n, p_edge, seed)?.degree_sequence()
}

/// Havel–Hakimi on degree buckets: `O(n + Σd)` time.
pub fn is_graphical(seq: &DegreeSequence) -> bool {
    let n = seq.len();
    if seq.sum() % 2 == 1 {
        return false;
    }
    if seq.degrees().iter().any(|&d| d as usize >= n) {
        return false;
    }
    let max = seq.max_degree() as usize;
    // count[k] = number of remaining vertices with residual degree k
    let mut count = vec![0usize; max + 1];
    for &d in seq.degrees() {
        count[d as usize] += 1;
    }
    let mut top = max;
    let mut moved = Vec::new();
    loop {
        while top > 0 && count[top] == 0 {
            top -= 1;
        }
        if top == 0 {
            return true;
        }
        // Remove one vertex of largest degree, then lower the `top` next
        // largest residual degrees by one.
        count[top] -= 1;
        let mut need = top;
        let mut k = top;
        moved.clear();
        while need > 0 {
            if k == 0 {
                return false;
            }
            let take = count[k].min(need);
            if take > 0 {
                count[k] -= take;
                moved.push((k - 1, take));
                need -= take;
            }
            k -= 1;
        }
        for &(k, c) in &moved {
            count[k] += c;
        }
    }
}

/// Havel–Hakimi realization followed by `10·|E|` attempted double-edge swaps.
/// Swaps that would create a loop or a repeated edge are skipped, so the
/// degree of every vertex is preserved exactly. The result is only
/// approximately uniform over realizations.
pub fn realize_graph(seq: &DegreeSequence, seed: u64) -> Result<ConcreteGraph> {
    if !is_graphical(seq) {
        return Err(Error::NotGraphical("Havel–Hakimi reduction fails".into()));
    }
    let n = seq.len();
    let mut residual: Vec<(u32, usize)> = seq.degrees().iter().enumerate().map(|(v, &d)| (d, v)).collect();
    let mut g = ConcreteGraph::empty(n);
    loop {
        residual.sort_unstable_by(|a, b| b.cmp(a));
        while residual.last().is_some_and(|r| r.0 == 0) {
            residual.pop();
        }
        if residual.is_empty() {
            break;
        }
        let (d, v) = residual[0];
        residual[0].0 = 0;
        for r in residual.iter_mut().skip(1).take(d as usize) {
            g.add_edge(v, r.1);
            r.0 -= 1;
        }
    }
    let mut edges = g.edges();
    if edges.len() >= 2 {
        let mut rng = rng_from_seed(seed);
        for _ in 0..SWAPS_PER_EDGE * edges.len() {
            let i = rng.gen_range(0..edges.len());
            let j = rng.gen_range(0..edges.len());
            if i == j {
                continue;
            }
            let (a, b) = edges[i];
            let (c, d) = if rng.gen::<bool>() { edges[j] } else { (edges[j].1, edges[j].0) };
            // (a, b), (c, d) → (a, d), (c, b)
            if a == d || c == b || g.has_edge(a, d) || g.has_edge(c, b) {
                continue;
            }
            g.remove_edge(a, b);
            g.remove_edge(c, d);
            g.add_edge(a, d);
            g.add_edge(c, b);
            edges[i] = (a, d);
            edges[j] = (c, b);
        }
    }
    Ok(g)
}

/// 4-regular wrap-around grid; vertex `r·cols + c`.
pub fn torus_grid(rows: usize, cols: usize) -> Result<ConcreteGraph> {
    if rows < 3 || cols < 3 {
        return Err(invalid("rows/cols", "both dimensions must be at least 3"));
    }
    let mut g = ConcreteGraph::empty(rows * cols);
    for r in 0..rows {
        for c in 0..cols {
            let v = r * cols + c;
            g.add_edge(v, r * cols + (c + 1) % cols);
            g.add_edge(v, ((r + 1) % rows) * cols + c);
        }
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    /// Erdős–Gallai, as an independent check of the bucket Havel–Hakimi.
    fn erdos_gallai(degrees: &[u32]) -> bool {
        let mut d: Vec<u64> = degrees.iter().map(|&x| x as u64).collect();
        d.sort_unstable_by(|a, b| b.cmp(a));
        if d.iter().sum::<u64>() % 2 == 1 {
            return false;
        }
        let n = d.len();
        (1..=n).all(|k| {
            let lhs: u64 = d[..k].iter().sum();
            let rhs = (k * (k - 1)) as u64 + d[k..].iter().map(|&x| x.min(k as u64)).sum::<u64>();
            lhs <= rhs
        })
    }

    #[test]
    fn constant_examples() {
        assert_eq!(constant_sequence(1000, 4).unwrap().degrees(), &[4; 1000][..]);
        assert_eq!(constant_sequence(2, 1).unwrap().degrees(), &[1, 1]);
        assert!(matches!(constant_sequence(3, 1), Err(Error::NotGraphical(_))));
        assert!(constant_sequence(3, 3).is_err());
    }

    #[test]
    fn graphical_examples() {
        let s = |v: &[u32]| DegreeSequence::new(v.to_vec()).unwrap();
        assert!(is_graphical(&s(&[3, 3, 3, 3])));
        assert!(!is_graphical(&s(&[3, 1])));
        assert!(!is_graphical(&s(&[4, 4, 4, 1, 1])));
        assert!(is_graphical(&s(&[0])));
        assert!(!is_graphical(&s(&[2, 2])));
    }

    #[test]
    fn graphical_agrees_with_erdos_gallai() {
        for n in 1..=6u32 {
            let total = (n as usize).pow(n);
            for code in 0..total {
                let mut c = code;
                let degrees: Vec<u32> = (0..n)
                    .map(|_| {
                        let d = (c % n as usize) as u32;
                        c /= n as usize;
                        d
                    })
                    .collect();
                let seq = DegreeSequence::new(degrees.clone()).unwrap();
                assert_eq!(is_graphical(&seq), erdos_gallai(&degrees), "{degrees:?}");
            }
        }
    }

    #[test]
    fn five_vertex_sequences_match_exhaustive_graph_scan() {
        let pairs: Vec<(usize, usize)> = (0..5).flat_map(|u| (u + 1..5).map(move |v| (u, v))).collect();
        let mut realizable = alloc::collections::BTreeSet::new();
        for mask in 0u32..1 << pairs.len() {
            let mut deg = [0u32; 5];
            for (e, &(u, v)) in pairs.iter().enumerate() {
                if mask >> e & 1 == 1 {
                    deg[u] += 1;
                    deg[v] += 1;
                }
            }
            deg.sort_unstable();
            realizable.insert(deg);
        }
        assert!(!realizable.contains(&[1, 1, 4, 4, 4]));
        for code in 0..5usize.pow(5) {
            let mut c = code;
            let mut deg = [0u32; 5];
            for d in deg.iter_mut() {
                *d = (c % 5) as u32;
                c /= 5;
            }
            let seq = DegreeSequence::new(deg.to_vec()).unwrap();
            deg.sort_unstable();
            assert_eq!(is_graphical(&seq), realizable.contains(&deg));
        }
    }

    #[test]
    fn realization_preserves_degrees() {
        for seed in 0..20 {
            let seq = powerlaw_sequence(60, &q(5, 2), seed).unwrap();
            let g = realize_graph(&seq, seed).unwrap();
            assert_eq!(g.degree_sequence().unwrap(), seq);
        }
        let bad = DegreeSequence::new(vec![3, 1]).unwrap();
        assert!(matches!(realize_graph(&bad, 0), Err(Error::NotGraphical(_))));
    }

    #[test]
    fn powerlaw_pmf_ratio() {
        let law = PowerLaw::new(&q(3, 1), 999).unwrap();
        assert!((law.pmf(1) / law.pmf(2) - 8.0).abs() < 1e-9);
        assert!(PowerLaw::new(&q(1, 1), 10).is_err());
    }

    #[test]
    fn ba_edge_count_and_min_degree() {
        for seed in 0..5 {
            let g = ba_graph(200, 3, seed).unwrap();
            assert_eq!(g.edge_count(), 3 * 197);
            assert!((3..200).all(|v| g.degree(v) >= 3));
        }
        assert!(ba_graph(5, 5, 0).is_err());
    }

    #[test]
    fn er_extremes() {
        assert!(er_sequence(50, &q(0, 1), 1).unwrap().degrees().iter().all(|&d| d == 0));
        assert!(er_sequence(50, &q(1, 1), 1).unwrap().degrees().iter().all(|&d| d == 49));
        let g = er_graph(300, &q(1, 2), 9).unwrap();
        let expected = 300.0 * 299.0 / 4.0;
        assert!((g.edge_count() as f64 - expected).abs() < 0.05 * expected);
    }

    #[test]
    fn torus_examples() {
        let g = torus_grid(3, 3).unwrap();
        assert_eq!(g.n(), 9);
        assert!((0..9).all(|v| g.degree(v) == 4));
        assert_eq!(torus_grid(5, 4).unwrap().edge_count(), 40);
        assert!(torus_grid(2, 5).is_err());
    }

    #[test]
    fn generation_is_deterministic() {
        let spec = GenSpec { family: Family::ErdosRenyi { p_edge: q(1, 50) }, n: 200, seed: 7 };
        assert_eq!(spec.graph().unwrap(), spec.graph().unwrap());
        let spec = GenSpec { family: Family::PowerLaw { gamma: q(5, 2) }, n: 200, seed: 7 };
        assert_eq!(spec.sequence().unwrap(), spec.sequence().unwrap());
        assert_ne!(derive_seed(1, 0, 0), derive_seed(1, 0, 1));
        assert_ne!(derive_seed(1, 0, 1), derive_seed(1, 1, 0));
    }
}
