//! Random-host comparisons and affine tails of integer sequences.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{for_each_combination, k_subsets_colex};
use crate::error::{Error, Result};
use crate::hypergraph::{Edge, PatternFamily, UniformHypergraph, Vertex};
use crate::patterns::make_clique;
use crate::solver::{wsat_bnb, SolveOptions};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffineFit {
    pub samples: Vec<(i64, i64)>,
    pub slope: i64,
    pub intercept: i64,
    /// Least sampled `n` from which `f(n) = slope * n + intercept` holds on the sample.
    pub onset: i64,
    pub valid: bool,
}

/// Fits the line through the last two samples and extends it backwards while it agrees.
/// The fit is valid when the slope is an integer and at least three trailing samples agree.
pub fn affine_tail_fit(samples: &[(i64, i64)]) -> Result<AffineFit> {
    if samples.len() < 3 {
        return Err(Error::invalid("an affine tail fit needs at least 3 samples"));
    }
    let mut s = samples.to_vec();
    s.sort_unstable();
    let (n1, f1) = s[s.len() - 2];
    let (n2, f2) = s[s.len() - 1];
    if n1 == n2 {
        return Err(Error::invalid(format!("duplicate sample at n = {n2}")));
    }
    let integral = (f2 - f1) % (n2 - n1) == 0;
    let slope = (f2 - f1) / (n2 - n1);
    let intercept = f2 - slope * n2;
    let agree = s
        .iter()
        .rev()
        .take_while(|&&(n, f)| integral && f == slope * n + intercept)
        .count();
    let onset = s[s.len() - agree.max(1)].0;
    Ok(AffineFit {
        samples: s,
        slope,
        intercept,
        onset,
        valid: integral && agree >= 3,
    })
}

/// `G(n, p)`: each pair independently with probability `p`, scanned in colex order.
pub fn gnp_sample(n: usize, p: f64, seed: u64) -> Result<UniformHypergraph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::invalid(format!("edge probability {p} is outside [0, 1]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let edges: Vec<Vec<Vertex>> = k_subsets_colex(n, 2).into_iter().filter(|_| rng.gen_bool(p)).collect();
    UniformHypergraph::from_edges(2, n, edges)
}

/// Every pair `x1, x2` lies in a `v`-clique of `K_n` whose edges other than `{x1, x2}` are all in `g`.
pub fn clique_minus_edge_property(g: &UniformHypergraph, v: usize) -> bool {
    let n = g.n();
    if v < 2 || v > n {
        return false;
    }
    let has = |a: Vertex, b: Vertex| g.multiplicity(&Edge::new(vec![a, b]).expect("distinct")) > 0;
    k_subsets_colex(n, 2).into_iter().all(|pair| {
        let (x1, x2) = (pair[0], pair[1]);
        let others: Vec<Vertex> = (0..n as Vertex).filter(|&w| w != x1 && w != x2).collect();
        for_each_combination(others.len(), v - 2, |idx| {
            let mut verts: Vec<Vertex> = idx.iter().map(|&i| others[i]).collect();
            let inner_ok = verts.iter().all(|&w| has(w, x1) && has(w, x2));
            verts.sort_unstable();
            inner_ok && verts.iter().enumerate().all(|(i, &a)| verts[i + 1..].iter().all(|&b| has(a, b)))
        })
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRow {
    pub seed: u64,
    pub n: usize,
    pub p: f64,
    pub wsat_gn: Option<usize>,
    pub wsat_kn: usize,
    pub property_held: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RemarkSummary {
    pub rows: Vec<TrialRow>,
    pub trials_with_property: usize,
    /// Property trials with `wsat(G_n) >= wsat(K_n)`.
    pub property_and_at_least: usize,
    /// Property trials with `wsat(G_n) < wsat(K_n)`; any such trial contradicts the implication.
    pub violations: usize,
    /// Trials whose exact value on `G_n` timed out.
    pub skipped: usize,
}

/// Compares `wsat(G(n,p), F)` with `wsat(K_n, F)` over seeded trials; trial `t` uses seed `seed + t`.
pub fn remark_check(n: usize, p: f64, f: &UniformHypergraph, trials: usize, seed: u64, opts: SolveOptions) -> Result<RemarkSummary> {
    if f.r() != 2 {
        return Err(Error::invalid("the random-graph comparison is defined for graphs"));
    }
    let family = PatternFamily::single(f.clone())?;
    let kn = make_clique(n, 2)?;
    let wsat_kn = wsat_bnb(&kn, &family, &[], SolveOptions::default())?
        .value
        .expect("no timeout on the complete host");
    let rows = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let s = seed + t;
            let g = gnp_sample(n, p, s)?;
            let rep = wsat_bnb(&g, &family, &[], opts)?;
            Ok(TrialRow {
                seed: s,
                n,
                p,
                wsat_gn: rep.value,
                wsat_kn,
                property_held: clique_minus_edge_property(&g, f.n()),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let with_property: Vec<&TrialRow> = rows.iter().filter(|r| r.property_held && r.wsat_gn.is_some()).collect();
    Ok(RemarkSummary {
        trials_with_property: rows.iter().filter(|r| r.property_held).count(),
        property_and_at_least: with_property.iter().filter(|r| r.wsat_gn >= Some(r.wsat_kn)).count(),
        violations: with_property.iter().filter(|r| r.wsat_gn < Some(r.wsat_kn)).count(),
        skipped: rows.iter().filter(|r| r.wsat_gn.is_none()).count(),
        rows,
    })
}
