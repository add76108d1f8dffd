//! Built-in hosts and patterns.

use crate::combinatorics::k_subsets_colex;
use crate::error::{Error, Result};
use crate::hypergraph::{PatternFamily, UniformHypergraph, Vertex};

/// The complete `r`-uniform hypergraph on `n` vertices.
pub fn make_clique(n: usize, r: usize) -> Result<UniformHypergraph> {
    if r < 2 || n < r {
        return Err(Error::invalid(format!(
            "clique needs n >= r >= 2, got n = {n}, r = {r}"
        )));
    }
    UniformHypergraph::from_edges(r, n, k_subsets_colex(n, r))
}

/// Two disjoint `k`-cliques on `0..k` and `k..2k` joined by the edge `{k-1, k}`.
pub fn make_dumbbell(k: usize) -> Result<UniformHypergraph> {
    if k < 3 {
        return Err(Error::invalid(format!("dumbbell needs k >= 3, got {k}")));
    }
    let kk = k as Vertex;
    let mut edges = Vec::new();
    for offset in [0, kk] {
        for s in k_subsets_colex(k, 2) {
            edges.push(vec![s[0] + offset, s[1] + offset]);
        }
    }
    edges.push(vec![kk - 1, kk]);
    UniformHypergraph::from_edges(2, 2 * k, edges)
}

/// Complete bipartite graph with parts `0..s` and `s..s+t`.
pub fn make_biclique(s: usize, t: usize) -> Result<UniformHypergraph> {
    if s == 0 || t == 0 {
        return Err(Error::invalid("biclique parts must be non-empty"));
    }
    let edges = (0..s as Vertex)
        .flat_map(|a| (s as Vertex..(s + t) as Vertex).map(move |b| vec![a, b]));
    UniformHypergraph::from_edges(2, s + t, edges)
}

/// The graph cycle on `l >= 3` vertices.
pub fn make_cycle(l: usize) -> Result<UniformHypergraph> {
    if l < 3 {
        return Err(Error::invalid(format!("cycle needs at least 3 vertices, got {l}")));
    }
    let l32 = l as Vertex;
    UniformHypergraph::from_edges(2, l, (0..l32).map(|i| vec![i, (i + 1) % l32]))
}

/// `G^k`: every edge of the simple hypergraph `g` repeated `k` times.
pub fn with_multiplicity(g: &UniformHypergraph, k: u32) -> Result<UniformHypergraph> {
    if !g.is_simple() {
        return Err(Error::invalid("with_multiplicity expects a simple hypergraph"));
    }
    if k == 0 {
        return Err(Error::invalid("multiplicity must be at least 1"));
    }
    UniformHypergraph::from_multiedges(
        g.r(),
        g.n(),
        g.edges().iter().map(|e| (e.vertices().to_vec(), k)),
    )
}

/// The family `{F_e^k : e in E(F)}`: pattern `i` repeats every edge `k` times
/// except edge `i` (colex position), which appears once.
pub fn lift_family(f: &UniformHypergraph, k: u32) -> Result<PatternFamily> {
    if !f.is_simple() {
        return Err(Error::invalid("lift_family expects a simple pattern"));
    }
    if f.edge_count() == 0 {
        return Err(Error::invalid("cannot lift an edgeless pattern"));
    }
    if k == 0 {
        return Err(Error::invalid("multiplicity must be at least 1"));
    }
    let mut patterns = Vec::with_capacity(f.edge_count());
    let mut labels = Vec::with_capacity(f.edge_count());
    for (i, single) in f.edges().iter().enumerate() {
        let p = UniformHypergraph::from_multiedges(
            f.r(),
            f.n(),
            f.edges()
                .iter()
                .enumerate()
                .map(|(j, e)| (e.vertices().to_vec(), if i == j { 1 } else { k })),
        )?;
        patterns.push(p);
        labels.push(Some(format!("lift^{k} at {single}")));
    }
    PatternFamily::with_labels(patterns, labels)
}
