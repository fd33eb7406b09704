//! Maximum-weight clique by branch and bound on bitmask graphs (≤ 64 vertices).

use alloc::vec::Vec;

use num_traits::Zero;

use crate::rational::Rational;

pub const MAX_VERTICES: usize = 64;

/// Undirected graph on at most 64 vertices; `adj[v]` never contains `v`.
#[derive(Debug, Clone)]
pub struct Graph {
    adj: Vec<u64>,
}

impl Graph {
    /// Builds the graph with an edge `{u, v}` whenever `edge(u, v)` holds.
    /// `edge` is only queried for `u < v`.
    pub fn from_fn(n: usize, mut edge: impl FnMut(usize, usize) -> bool) -> Self {
        assert!(n <= MAX_VERTICES, "clique graphs are limited to 64 vertices");
        let mut adj = alloc::vec![0u64; n];
        for u in 0..n {
            for v in u + 1..n {
                if edge(u, v) {
                    adj[u] |= 1 << v;
                    adj[v] |= 1 << u;
                }
            }
        }
        Self { adj }
    }

    pub fn len(&self) -> usize {
        self.adj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn neighbors(&self, v: usize) -> u64 {
        self.adj[v]
    }

    pub fn is_clique(&self, set: u64) -> bool {
        let mut rest = set;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if set & !(1u64 << v) & !self.adj[v] != 0 {
                return false;
            }
        }
        true
    }
}

pub fn members(set: u64) -> impl Iterator<Item = usize> {
    let mut rest = set;
    core::iter::from_fn(move || {
        if rest == 0 {
            None
        } else {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            Some(v)
        }
    })
}

/// A clique of maximum total weight. Weights must be nonnegative.
///
/// Vertices are branched on in index order, including before excluding, and a
/// clique only replaces the incumbent when strictly heavier, so the result is
/// deterministic.
pub fn max_weight_clique(graph: &Graph, weights: &[Rational]) -> (Rational, u64) {
    debug_assert_eq!(graph.len(), weights.len());
    let all = if graph.len() == 64 { u64::MAX } else { (1u64 << graph.len()) - 1 };
    let mut best = (Rational::zero(), 0u64);
    let mut first = true;
    expand(graph, weights, 0, &Rational::zero(), all, &mut best, &mut first);
    best
}

fn expand(
    graph: &Graph,
    weights: &[Rational],
    chosen: u64,
    chosen_weight: &Rational,
    candidates: u64,
    best: &mut (Rational, u64),
    first: &mut bool,
) {
    let bound = chosen_weight + members(candidates).fold(Rational::zero(), |acc, v| acc + &weights[v]);
    if !*first && bound <= best.0 {
        return;
    }
    if candidates == 0 {
        *best = (chosen_weight.clone(), chosen);
        *first = false;
        return;
    }
    let v = candidates.trailing_zeros() as usize;
    let bit = 1u64 << v;
    expand(
        graph,
        weights,
        chosen | bit,
        &(chosen_weight + &weights[v]),
        candidates & graph.neighbors(v),
        best,
        first,
    );
    expand(graph, weights, chosen, chosen_weight, candidates & !bit, best, first);
}
