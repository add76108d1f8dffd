//! Linear matroids over `F_p`: one vector per edge instance.
//!
//! The generic constructions assign random vectors to vertices and build edge vectors
//! from them. Genericity is not assumed: `hyper_clique_assignment` re-checks every
//! claimed property on the sample and refuses to return an assignment that fails.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{binom, colex_rank, for_each_combination};
use crate::error::{Error, Result};
use crate::field::{self, Echelon, PrimeField};
use crate::hyper_tools::clique_wsat_formula;
use crate::hypergraph::{Edge, EdgeInstance, PatternFamily, UniformHypergraph};
use crate::matroid::{verify_weakly_saturated, GroundSet, MatroidOracle};
use crate::patterns::make_clique;

pub const MAX_SAMPLE_ATTEMPTS: usize = 10;
const GENERAL_POSITION_CHECK_LIMIT: u64 = 100_000;
const CERTIFICATE_TRIALS: usize = 100;

#[derive(Clone, Debug)]
pub struct VectorAssignment {
    field: PrimeField,
    dim: usize,
    ground: GroundSet,
    vectors: Vec<Vec<u64>>,
    seed: Option<u64>,
    label: String,
}

#[derive(Serialize, Deserialize)]
struct AssignmentFile {
    p: u64,
    #[serde(rename = "D")]
    dim: usize,
    vectors: BTreeMap<String, Vec<i64>>,
}

impl VectorAssignment {
    /// `vectors[i]` is the vector of ground element `i` of `host`; entries are reduced mod `p`.
    pub fn new(host: &UniformHypergraph, p: u64, dim: usize, vectors: Vec<Vec<u64>>, label: impl Into<String>) -> Result<Self> {
        let field = PrimeField::new(p)?;
        let ground = GroundSet::new(host);
        if vectors.len() != ground.len() {
            return Err(Error::invalid(format!(
                "{} vectors for {} ground-set elements",
                vectors.len(),
                ground.len()
            )));
        }
        if let Some(bad) = vectors.iter().position(|v| v.len() != dim) {
            return Err(Error::invalid(format!("vector for {} has the wrong length", ground.element(bad))));
        }
        let vectors = vectors.into_iter().map(|v| v.into_iter().map(|x| x % p).collect()).collect();
        Ok(VectorAssignment {
            field,
            dim,
            ground,
            vectors,
            seed: None,
            label: label.into(),
        })
    }

    /// Reads `{p, D, vectors: {"0,1": [..], "0,1#1": [..]}}`; a key without `#` covers every
    /// instance of the edge, and an instance key overrides it.
    pub fn from_json(host: &UniformHypergraph, text: &str) -> Result<Self> {
        let file: AssignmentFile = serde_json::from_str(text)?;
        let field = PrimeField::new(file.p)?;
        let ground = GroundSet::new(host);
        let mut per_edge: BTreeMap<Edge, Vec<u64>> = BTreeMap::new();
        let mut per_instance: BTreeMap<EdgeInstance, Vec<u64>> = BTreeMap::new();
        for (key, raw) in &file.vectors {
            if raw.len() != file.dim {
                return Err(Error::invalid(format!("vector `{key}` has length {}, expected {}", raw.len(), file.dim)));
            }
            let v: Vec<u64> = raw.iter().map(|&x| field.from_i64(x)).collect();
            let (edge_part, inst_part) = match key.split_once('#') {
                Some((e, i)) => (e, Some(i)),
                None => (key.as_str(), None),
            };
            let verts = edge_part
                .split(',')
                .map(|t| t.trim().parse::<u32>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|_| Error::invalid(format!("bad edge key `{key}`")))?;
            let edge = Edge::new(verts)?;
            match inst_part {
                None => {
                    per_edge.insert(edge, v);
                }
                Some(i) => {
                    let instance = i.parse().map_err(|_| Error::invalid(format!("bad instance in key `{key}`")))?;
                    per_instance.insert(EdgeInstance { edge, instance }, v);
                }
            }
        }
        for inst in per_instance.keys() {
            if ground.index_of(inst).is_none() {
                return Err(Error::invalid(format!("{inst} is not an instance of the host")));
            }
        }
        for e in per_edge.keys() {
            if host.position(e).is_none() {
                return Err(Error::invalid(format!("{e} is not a host edge")));
            }
        }
        let vectors = ground
            .elements()
            .iter()
            .map(|inst| {
                per_instance
                    .get(inst)
                    .or_else(|| per_edge.get(&inst.edge))
                    .cloned()
                    .ok_or_else(|| Error::invalid(format!("no vector for {inst}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(VectorAssignment {
            field,
            dim: file.dim,
            ground,
            vectors,
            seed: None,
            label: format!("linear(file, p={}, D={})", file.p, file.dim),
        })
    }

    pub fn to_json(&self) -> String {
        let vectors = self
            .ground
            .elements()
            .iter()
            .zip(&self.vectors)
            .map(|(inst, v)| {
                (
                    format!("{}#{}", inst.edge.key(), inst.instance),
                    v.iter().map(|&x| self.field.to_i64(x)).collect(),
                )
            })
            .collect();
        serde_json::to_string(&AssignmentFile {
            p: self.field.p(),
            dim: self.dim,
            vectors,
        })
        .expect("assignment serializes")
    }

    pub fn p(&self) -> u64 {
        self.field.p()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn vector(&self, idx: usize) -> &[u64] {
        &self.vectors[idx]
    }

    fn refs(&self, set: &[usize]) -> Vec<&[u64]> {
        set.iter().map(|&i| self.vectors[i].as_slice()).collect()
    }
}

/// Rank of the vectors of `subset` over `F_p`.
pub fn field_rank(va: &VectorAssignment, subset: &[usize]) -> usize {
    field::rank(va.field, &va.refs(subset))
}

/// A linear dependency `Σ λ_e w(e) = 0` among the vectors of a cycle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleCertificate {
    pub edges: Vec<EdgeInstance>,
    pub lambda: Vec<u64>,
    pub all_nonzero: bool,
}

impl CycleCertificate {
    /// Recomputes `Σ λ_e w(e)` from the assignment.
    pub fn check(&self, va: &VectorAssignment) -> Result<bool> {
        let idx = va.ground.indices(&self.edges)?;
        let sum = field::combine(va.field, &self.lambda, &va.refs(&idx));
        Ok(sum.iter().all(|&x| x == 0) && (!self.all_nonzero || self.lambda.iter().all(|&l| l != 0)))
    }
}

/// A dependency among the vectors of `subset` when `subset` is a cycle; `None` otherwise.
pub fn cycle_certificate(va: &VectorAssignment, subset: &[usize]) -> Option<CycleCertificate> {
    if subset.is_empty() {
        return None;
    }
    let f = va.field;
    let ker = field::kernel(f, &va.refs(subset));
    let covered = (0..subset.len()).all(|i| ker.iter().any(|k| k[i] != 0));
    if !covered {
        return None;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(va.seed.unwrap_or(0));
    let mut lambda = ker[0].clone();
    let mut trials = 0;
    while lambda.contains(&0) && trials < CERTIFICATE_TRIALS {
        lambda = vec![0; subset.len()];
        for k in &ker {
            let c = rng.gen_range(1..f.p());
            for (l, &x) in lambda.iter_mut().zip(k) {
                *l = f.add(*l, f.mul(c, x));
            }
        }
        trials += 1;
    }
    Some(CycleCertificate {
        edges: subset.iter().map(|&i| va.ground.element(i).clone()).collect(),
        all_nonzero: lambda.iter().all(|&x| x != 0),
        lambda,
    })
}

impl MatroidOracle for VectorAssignment {
    fn ground(&self) -> &GroundSet {
        &self.ground
    }

    fn is_independent(&self, set: &[usize]) -> bool {
        let mut e = Echelon::new(self.field);
        set.iter().all(|&i| e.insert(&self.vectors[i]))
    }

    fn describe(&self) -> String {
        self.label.clone()
    }

    fn basis(&self, set: &[usize]) -> Vec<usize> {
        let mut e = Echelon::new(self.field);
        set.iter().copied().filter(|&i| e.insert(&self.vectors[i])).collect()
    }

    /// Non-coloops are exactly the union of the supports of a kernel basis.
    fn non_coloops(&self, set: &[usize]) -> Vec<bool> {
        let ker = field::kernel(self.field, &self.refs(set));
        (0..set.len()).map(|i| ker.iter().any(|k| k[i] != 0)).collect()
    }

    fn instance_symmetric(&self) -> bool {
        let mut i = 0;
        for &m in self.ground.host().multiplicities() {
            let m = m as usize;
            if self.vectors[i + 1..i + m].iter().any(|v| *v != self.vectors[i]) {
                return false;
            }
            i += m;
        }
        true
    }
}

/// Draws `n` vectors in `F_p^d` such that every `min(n, d)` of them are independent.
/// The check is skipped when there are too many subsets to test.
fn sample_points(field: PrimeField, n: usize, d: usize, rng: &mut ChaCha8Rng) -> Result<Vec<Vec<u64>>> {
    let k = d.min(n);
    let check = binom(n as u64, k as u64) <= GENERAL_POSITION_CHECK_LIMIT;
    for _ in 0..MAX_SAMPLE_ATTEMPTS {
        let xs: Vec<Vec<u64>> = (0..n).map(|_| (0..d).map(|_| rng.gen_range(0..field.p())).collect()).collect();
        let degenerate = check
            && for_each_combination(n, k, |idx| {
                let refs: Vec<&[u64]> = idx.iter().map(|&i| xs[i].as_slice()).collect();
                field::rank(field, &refs) < k
            });
        if !degenerate {
            return Ok(xs);
        }
    }
    Err(Error::Degenerate(MAX_SAMPLE_ATTEMPTS))
}

/// Generic `d`-dimensional hyperconnectivity on `K_n`: edge `{i, j}` (`i < j`) has `x_j` in
/// block `i` and `-x_i` in block `j` of an `n*d`-long vector.
pub fn hyperconnectivity(n: usize, d: usize, p: u64, seed: u64) -> Result<VectorAssignment> {
    if d == 0 || n < d + 1 {
        return Err(Error::invalid(format!("hyperconnectivity needs d >= 1 and n >= d + 1, got n = {n}, d = {d}")));
    }
    let mut va = contraction_assignment(n, 2, d, p, seed)?;
    va.label = format!("hyperconnectivity(n={n}, d={d}, p={p}, seed={seed})");
    Ok(va)
}

/// Edge `S` maps to `(ι_{x^(k)} e_S)_{k < d}`: coordinate `(k, T)` for each `(r-1)`-set `T`,
/// with `T = S \ {v}` receiving `(-1)^(j+1) x_v[k]` where `v` is the `j`-th vertex of `S`.
/// Coordinates are laid out as blocks of `d` in colex order of `T`.
fn contraction_assignment(n: usize, r: usize, d: usize, p: u64, seed: u64) -> Result<VectorAssignment> {
    let field = PrimeField::new(p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let xs = sample_points(field, n, d, &mut rng)?;
    let host = make_clique(n, r)?;
    let dim = d * binom(n as u64, r as u64 - 1) as usize;
    let mut t = Vec::with_capacity(r - 1);
    let vectors = host
        .edges()
        .iter()
        .map(|e| {
            let mut w = vec![0u64; dim];
            for (j, &v) in e.vertices().iter().enumerate() {
                t.clear();
                t.extend(e.vertices().iter().copied().filter(|&u| u != v));
                let block = colex_rank(&t) as usize * d;
                for k in 0..d {
                    let x = xs[v as usize][k];
                    w[block + k] = if j % 2 == 1 { x } else { field.neg(x) };
                }
            }
            w
        })
        .collect();
    let mut va = VectorAssignment::new(&host, p, dim, vectors, String::new())?;
    va.seed = Some(seed);
    Ok(va)
}

/// Candidate linear matroid on `K_n^(r)` in which every copy of `K_s^(r)` is a cycle, with
/// `d = s - r`. Returned only after checking every copy and the rank `C(n,r) - C(n-s+r,r)`.
pub fn hyper_clique_assignment(n: usize, r: usize, s: usize, p: u64, seed: u64) -> Result<VectorAssignment> {
    if !(n >= s && s > r && r >= 2) {
        return Err(Error::invalid(format!("need n >= s > r >= 2, got n = {n}, r = {r}, s = {s}")));
    }
    let d = s - r;
    let mut va = contraction_assignment(n, r, d, p, seed)?;
    va.label = format!("hyper-clique(n={n}, r={r}, s={s}, p={p}, seed={seed})");
    let host = va.ground.host().clone();
    let family = PatternFamily::single(make_clique(s, r)?)?;
    let report = verify_weakly_saturated(&va, &host, &family, None)?;
    if let Some(ce) = report.counterexample {
        let shown: Vec<String> = ce.instances.iter().map(|i| i.edge.to_string()).collect();
        return Err(Error::SelfVerification(format!("copy {} is not a cycle", shown.join(" "))));
    }
    let expected = clique_wsat_formula(n, r, s)? as usize;
    let got = field_rank(&va, &va.ground.all());
    if got != expected {
        return Err(Error::SelfVerification(format!("rank {got}, expected {expected}")));
    }
    Ok(va)
}
