//! Lower bounds through the multigraph lift.
//!
//! Every edge of `G` is repeated `k` times and `F` is replaced by the family
//! `{F_e^k}`. A seed `H` for `(G, F)` lifts to the seed `H^k` of size
//! `k |E(H)|`, so a rank bound on `G^k` divided by `k` bounds `wsat(G, F)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hypergraph::{PatternFamily, UniformHypergraph};
use crate::matroid::{certify, MatroidOracle};
use crate::patterns::{lift_family, with_multiplicity};
use crate::percolation::is_weakly_saturated;
use crate::solver::{greedy_upper, UpperStrategy};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LiftReport {
    pub k: u32,
    pub host: UniformHypergraph,
    pub family: PatternFamily,
    pub matroid: String,
    pub rank: usize,
    /// `ceil(rank / k)`.
    pub bound: usize,
    pub copies_checked: usize,
    /// Size of a percolating seed for `(G, F)` found by the constructions, if any.
    pub upper: Option<usize>,
}

fn check_graphs(g: &UniformHypergraph, f: &UniformHypergraph, k: u32) -> Result<()> {
    if g.r() != 2 || f.r() != 2 {
        return Err(Error::invalid("the multigraph lift is defined for graphs"));
    }
    if !g.is_simple() || !f.is_simple() {
        return Err(Error::invalid("the lift expects a simple host and a simple pattern"));
    }
    if k == 0 {
        return Err(Error::invalid("k must be at least 1"));
    }
    Ok(())
}

/// Certifies `m` on `G^k` against the lifted family and returns `ceil(rank / k)`.
pub fn lift_bound<M: MatroidOracle + ?Sized>(
    g: &UniformHypergraph,
    f: &UniformHypergraph,
    k: u32,
    m: &M,
) -> Result<LiftReport> {
    check_graphs(g, f, k)?;
    let host = with_multiplicity(g, k)?;
    if m.ground().host() != &host {
        return Err(Error::invalid("the matroid must be defined on the instances of G^k"));
    }
    let family = lift_family(f, k)?;
    let cert = certify(m, &host, &family)?;
    let upper = greedy_upper(g, &PatternFamily::single(f.clone())?, UpperStrategy::Prune)
        .ok()
        .map(|r| r.upper);
    Ok(LiftReport {
        k,
        bound: cert.rank.div_ceil(k as usize),
        rank: cert.rank,
        matroid: cert.matroid,
        copies_checked: cert.copies_checked,
        host,
        family,
        upper,
    })
}

/// Checks that `h` weakly saturates `(G, F)` and that `h^k` percolates in `G^k`
/// under the lifted family; returns `k |E(h)|`.
pub fn lift_upper_transfer(g: &UniformHypergraph, f: &UniformHypergraph, k: u32, h: &UniformHypergraph) -> Result<usize> {
    check_graphs(g, f, k)?;
    if !h.is_simple() {
        return Err(Error::invalid("the seed must be simple"));
    }
    if !is_weakly_saturated(g, h, &PatternFamily::single(f.clone())?)? {
        return Err(Error::invalid("the seed does not weakly saturate the host"));
    }
    let lifted = with_multiplicity(h, k)?;
    if !is_weakly_saturated(&with_multiplicity(g, k)?, &lifted, &lift_family(f, k)?)? {
        return Err(Error::Percolation(format!("the {k}-fold seed does not percolate in the lifted host")));
    }
    Ok(lifted.instance_count())
}
