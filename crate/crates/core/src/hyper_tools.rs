//! Sharpness, the clique formula, and the sharpness-2 family built from a tight cycle and a clique.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::combinatorics::{binom, binom_signed, for_each_combination, k_subsets_colex};
use crate::error::{Error, Result};
use crate::hypergraph::{Edge, UniformHypergraph, Vertex};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SharpnessWitness {
    pub value: usize,
    pub edge: Edge,
    pub subset: Vec<Vertex>,
}

/// Least `s` such that some `s`-subset of some edge lies in no other edge.
pub fn sharpness(f: &UniformHypergraph) -> Result<SharpnessWitness> {
    if f.edge_count() == 0 {
        return Err(Error::invalid("sharpness of an edgeless hypergraph is undefined"));
    }
    for s in 0..=f.r() {
        let mut seen: HashMap<Vec<Vertex>, u32> = HashMap::new();
        for e in f.edges() {
            for_each_combination(e.len(), s, |idx| {
                let sub: Vec<Vertex> = idx.iter().map(|&i| e.vertices()[i]).collect();
                *seen.entry(sub).or_default() += 1;
                false
            });
        }
        for e in f.edges() {
            let mut found = None;
            for_each_combination(e.len(), s, |idx| {
                let sub: Vec<Vertex> = idx.iter().map(|&i| e.vertices()[i]).collect();
                if seen[&sub] == 1 {
                    found = Some(sub);
                    return true;
                }
                false
            });
            if let Some(subset) = found {
                return Ok(SharpnessWitness {
                    value: s,
                    edge: e.clone(),
                    subset,
                });
            }
        }
    }
    unreachable!("an edge is contained in no other edge of a simple hypergraph")
}

/// `C(n, r) - C(n - s + r, r)`.
pub fn clique_wsat_formula(n: usize, r: usize, s: usize) -> Result<u64> {
    if !(n >= s && s >= r && r >= 2) {
        return Err(Error::invalid(format!(
            "formula needs n >= s >= r >= 2, got n = {n}, s = {s}, r = {r}"
        )));
    }
    let top = n as i64 - s as i64 + r as i64;
    Ok(binom(n as u64, r as u64) - binom_signed(top, r as u64) as u64)
}

/// Tight cycle on `0..v1` (edges of `r` cyclically consecutive vertices) plus a clique on `v1..v1+v2`.
fn base_component(r: usize, v1: usize, v2: usize) -> Vec<Vec<Vertex>> {
    let mut edges: Vec<Vec<Vertex>> = (0..v1)
        .map(|i| (0..r).map(|j| ((i + j) % v1) as Vertex).collect())
        .collect();
    for e in k_subsets_colex(v2, r) {
        edges.push(e.into_iter().map(|x| x + v1 as Vertex).collect());
    }
    edges
}

fn check_appendix_params(r: usize, v1: usize, v2: usize) -> Result<()> {
    if r < 3 || v1 < 2 * r - 1 || v2 < r + 1 {
        return Err(Error::invalid(format!(
            "need r >= 3, v1 >= 2r - 1, v2 >= r + 1; got r = {r}, v1 = {v1}, v2 = {v2}"
        )));
    }
    Ok(())
}

/// Edges of the clique on the base component's vertices that the base lacks, in colex order.
pub fn appendix_missing_edges(r: usize, v1: usize, v2: usize) -> Result<Vec<Edge>> {
    check_appendix_params(r, v1, v2)?;
    let base: Vec<Edge> = base_component(r, v1, v2)
        .into_iter()
        .map(|e| Edge::new(e).expect("distinct vertices"))
        .collect();
    Ok(k_subsets_colex(v1 + v2, r)
        .into_iter()
        .map(|e| Edge::new(e).expect("distinct vertices"))
        .filter(|e| !base.contains(e))
        .collect())
}

/// Disjoint union of `F_0, F_1, ..., F_m` where `F_i` adds the first `i` missing edges to `F_0`.
/// Component `i` occupies vertices `[i*v, (i+1)*v)` with `v = v1 + v2`.
pub fn appendix_family(r: usize, v1: usize, v2: usize) -> Result<UniformHypergraph> {
    let missing = appendix_missing_edges(r, v1, v2)?;
    let base = base_component(r, v1, v2);
    let v = v1 + v2;
    let components = missing.len() + 1;
    let mut edges = Vec::new();
    for i in 0..components {
        let shift = (i * v) as Vertex;
        let extra = missing[..i].iter().map(|e| e.vertices().to_vec());
        for e in base.iter().cloned().chain(extra) {
            edges.push(e.into_iter().map(|x| x + shift).collect::<Vec<_>>());
        }
    }
    UniformHypergraph::from_edges(r, components * v, edges)
}
