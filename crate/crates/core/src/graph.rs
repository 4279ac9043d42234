//! Degree sequences and concrete simple graphs.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Multiset of vertex degrees. Order is kept but never matters to the
/// algorithms.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DegreeSequence {
    degrees: Vec<u32>,
}

impl DegreeSequence {
    pub fn new(degrees: Vec<u32>) -> Result<Self> {
        if degrees.is_empty() {
            return Err(Error::InvalidParameter {
                name: "degrees",
                reason: "degree sequence must have at least one entry".into(),
            });
        }
        Ok(DegreeSequence { degrees })
    }

    /// `n` copies of `d`, without a graphicality check.
    pub fn constant(n: usize, d: u32) -> Result<Self> {
        Self::new(vec![d; n])
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn len(&self) -> usize {
        self.degrees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.degrees.is_empty()
    }

    pub fn max_degree(&self) -> u32 {
        self.degrees.iter().copied().max().unwrap_or(0)
    }

    pub fn sum(&self) -> u64 {
        self.degrees.iter().map(|&d| d as u64).sum()
    }

    /// Degree → number of entries with that degree.
    pub fn histogram(&self) -> BTreeMap<u32, usize> {
        let mut h = BTreeMap::new();
        for &d in &self.degrees {
            *h.entry(d).or_insert(0) += 1;
        }
        h
    }

    /// Entries sorted in non-increasing order.
    pub fn sorted_desc(&self) -> Vec<u32> {
        let mut v = self.degrees.clone();
        v.sort_unstable_by(|a, b| b.cmp(a));
        v
    }
}

/// Undirected simple graph on vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ConcreteGraph {
    adjacency: Vec<Vec<usize>>,
}

impl ConcreteGraph {
    pub fn empty(n: usize) -> Self {
        ConcreteGraph {
            adjacency: vec![Vec::new(); n],
        }
    }

    /// Builds a graph from an edge list. Repeated edges (in either
    /// orientation) are merged; self-loops and out-of-range endpoints are
    /// rejected.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = ConcreteGraph::empty(n);
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidParameter {
                    name: "edges",
                    reason: alloc::format!("edge ({u}, {v}) has an endpoint outside 0..{n}"),
                });
            }
            if u == v {
                return Err(Error::InvalidParameter {
                    name: "edges",
                    reason: alloc::format!("self-loop at vertex {u}"),
                });
            }
            g.add_edge(u, v);
        }
        Ok(g)
    }

    /// Adds `{u, v}`; returns false if it was already present.
    pub fn add_edge(&mut self, u: usize, v: usize) -> bool {
        debug_assert!(u != v);
        match self.adjacency[u].binary_search(&v) {
            Ok(_) => false,
            Err(pos) => {
                self.adjacency[u].insert(pos, v);
                let pos = self.adjacency[v].binary_search(&u).unwrap_err();
                self.adjacency[v].insert(pos, u);
                true
            }
        }
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) -> bool {
        match self.adjacency[u].binary_search(&v) {
            Ok(pos) => {
                self.adjacency[u].remove(pos);
                let pos = self.adjacency[v].binary_search(&u).expect("symmetric adjacency");
                self.adjacency[v].remove(pos);
                true
            }
            Err(_) => false,
        }
    }

    pub fn n(&self) -> usize {
        self.adjacency.len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].binary_search(&v).is_ok()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for (u, nbrs) in self.adjacency.iter().enumerate() {
            out.extend(nbrs.iter().filter(|&&v| v > u).map(|&v| (u, v)));
        }
        out
    }

    pub fn degree_sequence(&self) -> Result<DegreeSequence> {
        DegreeSequence::new(self.adjacency.iter().map(|a| a.len() as u32).collect())
    }

    /// Vertices at distance 1 or 2 from `v`, excluding `v`.
    pub fn two_ball(&self, v: usize) -> Vec<usize> {
        let mut seen = vec![false; self.n()];
        seen[v] = true;
        let mut out = Vec::new();
        for &u in self.neighbors(v) {
            if !seen[u] {
                seen[u] = true;
                out.push(u);
            }
            for &w in self.neighbors(u) {
                if !seen[w] {
                    seen[w] = true;
                    out.push(w);
                }
            }
        }
        out.sort_unstable();
        out
    }

    pub fn complete(n: usize) -> Self {
        let mut g = ConcreteGraph::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v);
            }
        }
        g
    }

    pub fn cycle(n: usize) -> Self {
        let mut g = ConcreteGraph::empty(n);
        if n >= 3 {
            for u in 0..n {
                g.add_edge(u, (u + 1) % n);
            }
        } else if n == 2 {
            g.add_edge(0, 1);
        }
        g
    }

    pub fn path(n: usize) -> Self {
        let mut g = ConcreteGraph::empty(n);
        for u in 1..n {
            g.add_edge(u - 1, u);
        }
        g
    }

    /// Disjoint union, with `other`'s vertices shifted by `self.n()`.
    pub fn disjoint_union(&self, other: &ConcreteGraph) -> Self {
        let shift = self.n();
        let mut g = self.clone();
        g.adjacency
            .extend(other.adjacency.iter().map(|a| a.iter().map(|&v| v + shift).collect()));
        g
    }
}
