//! F-bootstrap percolation: closures, traces, and explicit saturated constructions.

use serde::{Deserialize, Serialize};

use crate::combinatorics::k_subsets_colex;
use crate::embedding::{degrees_of, has_copy_through, CompiledPattern, EdgeLookup, HostState};
use crate::error::{Error, Result};
use crate::hyper_tools::sharpness;
use crate::hypergraph::{Edge, PatternFamily, UniformHypergraph};

/// One percolation step: an instance added because it completes a copy of `pattern`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub edge: Edge,
    pub instance: u32,
    pub pattern: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosureReport {
    #[serde(rename = "final")]
    pub final_graph: UniformHypergraph,
    pub trace: Vec<TraceStep>,
    pub percolated: bool,
}

/// A host and family compiled once for many closure computations.
pub struct Percolator<'a> {
    host: &'a UniformHypergraph,
    lookup: EdgeLookup,
    compiled: Vec<CompiledPattern>,
}

impl<'a> Percolator<'a> {
    pub fn new(host: &'a UniformHypergraph, family: &PatternFamily) -> Result<Self> {
        if host.r() != family.r() {
            return Err(Error::UniformityMismatch {
                host: host.r(),
                pattern: family.r(),
            });
        }
        Ok(Percolator {
            host,
            lookup: EdgeLookup::new(host),
            compiled: family.patterns().iter().map(CompiledPattern::new).collect(),
        })
    }

    pub fn host(&self) -> &UniformHypergraph {
        self.host
    }

    /// Closes `counts` in place, scanning host positions in `order`.
    /// `trace` receives `(position, instance, pattern)` for each addition.
    pub(crate) fn close_counts(
        &self,
        counts: &mut [u32],
        order: &[usize],
        mut trace: Option<&mut Vec<(usize, u32, usize)>>,
    ) {
        let mult = self.host.multiplicities();
        let mut degree = degrees_of(self.host, counts);
        loop {
            let mut changed = false;
            for &pos in order {
                while counts[pos] < mult[pos] {
                    let Some(pattern) = self.witness(counts, &mut degree, pos) else {
                        break;
                    };
                    if let Some(t) = trace.as_deref_mut() {
                        t.push((pos, counts[pos] - 1, pattern));
                    }
                    changed = true;
                }
            }
            if !changed {
                return;
            }
        }
    }

    /// Tentatively adds one instance at `pos`; keeps it and returns the first
    /// witnessing pattern if some copy passes through it.
    fn witness(&self, counts: &mut [u32], degree: &mut [u32], pos: usize) -> Option<usize> {
        let anchor = self.host.edges()[pos].vertices();
        let fresh = counts[pos] == 0;
        counts[pos] += 1;
        if fresh {
            for &v in anchor {
                degree[v as usize] += 1;
            }
        }
        let state = HostState {
            lookup: &self.lookup,
            counts,
            degree,
        };
        let found = self
            .compiled
            .iter()
            .position(|p| has_copy_through(&state, p, anchor, state.counts[pos]));
        if found.is_none() {
            counts[pos] -= 1;
            if fresh {
                for &v in anchor {
                    degree[v as usize] -= 1;
                }
            }
        }
        found
    }

    pub(crate) fn closure_of_counts(&self, start: &[u32]) -> Vec<u32> {
        let mut counts = start.to_vec();
        let order: Vec<usize> = (0..counts.len()).collect();
        self.close_counts(&mut counts, &order, None);
        counts
    }

    pub(crate) fn percolates_counts(&self, start: &[u32]) -> bool {
        self.closure_of_counts(start) == self.host.multiplicities()
    }

    pub fn closure(&self, start: &UniformHypergraph) -> Result<ClosureReport> {
        let order: Vec<usize> = (0..self.host.edge_count()).collect();
        self.closure_in_order(start, &order)
    }

    /// Closure scanning candidate edges in a custom order (a permutation of host positions).
    pub fn closure_in_order(&self, start: &UniformHypergraph, order: &[usize]) -> Result<ClosureReport> {
        let mut counts = start.counts_over(self.host)?;
        let mut seen = vec![false; counts.len()];
        if order.len() != counts.len() || !order.iter().all(|&p| p < seen.len() && !std::mem::replace(&mut seen[p], true)) {
            return Err(Error::invalid("scan order must be a permutation of host edge positions"));
        }
        let mut raw = Vec::new();
        self.close_counts(&mut counts, order, Some(&mut raw));
        let trace = raw
            .into_iter()
            .map(|(pos, instance, pattern)| TraceStep {
                edge: self.host.edges()[pos].clone(),
                instance,
                pattern,
            })
            .collect();
        let percolated = counts == self.host.multiplicities();
        Ok(ClosureReport {
            final_graph: UniformHypergraph::from_counts(self.host, &counts),
            trace,
            percolated,
        })
    }
}

pub fn closure(
    host: &UniformHypergraph,
    start: &UniformHypergraph,
    family: &PatternFamily,
) -> Result<ClosureReport> {
    Percolator::new(host, family)?.closure(start)
}

pub fn is_weakly_saturated(
    host: &UniformHypergraph,
    start: &UniformHypergraph,
    family: &PatternFamily,
) -> Result<bool> {
    let perc = Percolator::new(host, family)?;
    Ok(perc.percolates_counts(&start.counts_over(host)?))
}

/// All edges of `K_n` meeting the first `|V(F)|` vertices.
pub fn join_construction(n: usize, f: &UniformHypergraph) -> Result<UniformHypergraph> {
    if f.r() != 2 {
        return Err(Error::invalid("join construction is defined for graphs"));
    }
    let v = f.n();
    if n < v + 2 {
        return Err(Error::invalid(format!("join construction needs n >= {} , got {n}", v + 2)));
    }
    let edges = k_subsets_colex(n, 2).into_iter().filter(|e| (e[0] as usize) < v);
    UniformHypergraph::from_edges(2, n, edges)
}

/// Edges of `K_n^(r)` with at most `s - 1` vertices outside the first `|V(F)|`.
pub fn hyper_construction(n: usize, f: &UniformHypergraph, s: usize) -> Result<UniformHypergraph> {
    let sharp = sharpness(f)?.value;
    if s != sharp {
        return Err(Error::invalid(format!("s = {s} differs from the sharpness {sharp} of the pattern")));
    }
    let (r, v) = (f.r(), f.n());
    if n < v {
        return Err(Error::invalid(format!("host must have at least {v} vertices, got {n}")));
    }
    let edges = k_subsets_colex(n, r)
        .into_iter()
        .filter(|e| e.iter().filter(|&&x| x as usize >= v).count() < s);
    UniformHypergraph::from_edges(r, n, edges)
}
