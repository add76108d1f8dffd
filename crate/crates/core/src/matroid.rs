//! Matroid oracles on host edge instances, and the weak saturation lower bound.
//!
//! If every copy of every pattern is a cycle of a matroid `M` on the host's edge
//! instances (no element of the copy is a coloop of the copy), then no seed
//! smaller than `rank(M)` can percolate, and every percolating seed spans `M`.

use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::embedding::{complete_vertex_map, for_each_instance_choice, support_groups, CopyImage};
use crate::error::{Error, Result};
use crate::hypergraph::{EdgeInstance, PatternFamily, UniformHypergraph, Vertex};

/// The instances of a host, indexed `(edge position, instance)` in colex edge order.
#[derive(Clone, Debug)]
pub struct GroundSet {
    host: UniformHypergraph,
    offsets: Vec<usize>,
    elements: Vec<EdgeInstance>,
}

impl GroundSet {
    pub fn new(host: &UniformHypergraph) -> Self {
        let mut offsets = Vec::with_capacity(host.edge_count() + 1);
        let mut acc = 0;
        for &m in host.multiplicities() {
            offsets.push(acc);
            acc += m as usize;
        }
        offsets.push(acc);
        GroundSet {
            host: host.clone(),
            offsets,
            elements: host.instances(),
        }
    }

    pub fn host(&self) -> &UniformHypergraph {
        &self.host
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[EdgeInstance] {
        &self.elements
    }

    pub fn element(&self, idx: usize) -> &EdgeInstance {
        &self.elements[idx]
    }

    /// Index of instance `instance` of the edge at host position `pos`.
    pub fn index(&self, pos: usize, instance: u32) -> usize {
        debug_assert!(self.offsets[pos] + (instance as usize) < self.offsets[pos + 1]);
        self.offsets[pos] + instance as usize
    }

    /// Host position of the edge carrying element `idx`.
    pub fn position_of(&self, idx: usize) -> usize {
        self.offsets.partition_point(|&o| o <= idx) - 1
    }

    pub fn index_of(&self, inst: &EdgeInstance) -> Option<usize> {
        let pos = self.host.position(&inst.edge)?;
        (inst.instance < self.host.multiplicities()[pos]).then(|| self.index(pos, inst.instance))
    }

    pub fn indices(&self, subset: &[EdgeInstance]) -> Result<Vec<usize>> {
        subset
            .iter()
            .map(|i| {
                self.index_of(i)
                    .ok_or_else(|| Error::invalid(format!("{i} is not a ground-set element")))
            })
            .collect()
    }

    /// The first `c` instances of every edge of `g`, where `c` is its multiplicity in `g`.
    pub fn indices_of_subgraph(&self, g: &UniformHypergraph) -> Result<Vec<usize>> {
        let counts = g.counts_over(&self.host)?;
        Ok(counts
            .iter()
            .enumerate()
            .flat_map(|(pos, &c)| (0..c).map(move |i| self.index(pos, i)))
            .collect())
    }

    pub fn all(&self) -> Vec<usize> {
        (0..self.len()).collect()
    }
}

/// An independence oracle over a ground set of edge instances.
pub trait MatroidOracle: Send + Sync {
    fn ground(&self) -> &GroundSet;

    fn is_independent(&self, set: &[usize]) -> bool;

    fn describe(&self) -> String;

    /// Greedy basis of `set`, scanning in the given order.
    fn basis(&self, set: &[usize]) -> Vec<usize> {
        let mut basis = Vec::new();
        for &e in set {
            basis.push(e);
            if !self.is_independent(&basis) {
                basis.pop();
            }
        }
        basis
    }

    fn rank_of(&self, set: &[usize]) -> usize {
        self.basis(set).len()
    }

    /// For each element of `set`, whether removing it keeps the rank of `set`.
    fn non_coloops(&self, set: &[usize]) -> Vec<bool> {
        let full = self.rank_of(set);
        (0..set.len())
            .map(|i| {
                let rest: Vec<usize> = set.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &e)| e).collect();
                self.rank_of(&rest) == full
            })
            .collect()
    }

    /// True when permuting the instances of any single edge is an automorphism.
    fn instance_symmetric(&self) -> bool {
        false
    }
}

/// Every subset is independent.
pub struct FreeMatroid {
    ground: GroundSet,
}

impl FreeMatroid {
    pub fn new(host: &UniformHypergraph) -> Self {
        FreeMatroid {
            ground: GroundSet::new(host),
        }
    }
}

impl MatroidOracle for FreeMatroid {
    fn ground(&self) -> &GroundSet {
        &self.ground
    }

    fn is_independent(&self, _set: &[usize]) -> bool {
        true
    }

    fn describe(&self) -> String {
        "free".into()
    }

    fn instance_symmetric(&self) -> bool {
        true
    }
}

/// Subsets of size at most `k` are independent.
pub struct UniformMatroid {
    ground: GroundSet,
    k: usize,
}

impl UniformMatroid {
    pub fn new(host: &UniformHypergraph, k: usize) -> Self {
        UniformMatroid {
            ground: GroundSet::new(host),
            k,
        }
    }
}

impl MatroidOracle for UniformMatroid {
    fn ground(&self) -> &GroundSet {
        &self.ground
    }

    fn is_independent(&self, set: &[usize]) -> bool {
        set.len() <= self.k
    }

    fn describe(&self) -> String {
        format!("uniform(rank {})", self.k)
    }

    fn instance_symmetric(&self) -> bool {
        true
    }
}

/// `M` restricted to the instances of edges avoiding a vertex.
pub struct Restriction<'a, M: MatroidOracle + ?Sized> {
    inner: &'a M,
    ground: GroundSet,
    to_inner: Vec<usize>,
    removed: Vertex,
}

impl<'a, M: MatroidOracle + ?Sized> Restriction<'a, M> {
    pub fn avoiding_vertex(inner: &'a M, u: Vertex) -> Self {
        let host = inner.ground().host();
        let counts: Vec<u32> = host
            .iter()
            .map(|(e, m)| if e.contains(u) { 0 } else { m })
            .collect();
        let restricted = UniformHypergraph::from_counts(host, &counts);
        let ground = GroundSet::new(&restricted);
        let to_inner = ground
            .elements()
            .iter()
            .map(|i| inner.ground().index_of(i).expect("restricted element exists in the host"))
            .collect();
        Restriction {
            inner,
            ground,
            to_inner,
            removed: u,
        }
    }

    /// The element of the restriction corresponding to an element of the original matroid.
    pub fn from_inner(&self, idx: usize) -> Option<usize> {
        self.ground.index_of(self.inner.ground().element(idx))
    }

    fn map(&self, set: &[usize]) -> Vec<usize> {
        set.iter().map(|&i| self.to_inner[i]).collect()
    }
}

impl<M: MatroidOracle + ?Sized> MatroidOracle for Restriction<'_, M> {
    fn ground(&self) -> &GroundSet {
        &self.ground
    }

    fn is_independent(&self, set: &[usize]) -> bool {
        self.inner.is_independent(&self.map(set))
    }

    fn describe(&self) -> String {
        format!("{} avoiding vertex {}", self.inner.describe(), self.removed)
    }

    fn rank_of(&self, set: &[usize]) -> usize {
        self.inner.rank_of(&self.map(set))
    }

    fn non_coloops(&self, set: &[usize]) -> Vec<bool> {
        self.inner.non_coloops(&self.map(set))
    }

    fn instance_symmetric(&self) -> bool {
        self.inner.instance_symmetric()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankReport {
    pub subset: Vec<EdgeInstance>,
    pub rank: usize,
    pub basis: Vec<EdgeInstance>,
}

pub fn rank<M: MatroidOracle + ?Sized>(m: &M, subset: &[EdgeInstance]) -> Result<RankReport> {
    let idx = m.ground().indices(subset)?;
    let basis = m.basis(&idx);
    Ok(RankReport {
        subset: subset.to_vec(),
        rank: basis.len(),
        basis: basis.iter().map(|&i| m.ground().element(i).clone()).collect(),
    })
}

/// Rank of the whole ground set, with a basis certificate.
pub fn full_rank<M: MatroidOracle + ?Sized>(m: &M) -> RankReport {
    let all = m.ground().all();
    let basis = m.basis(&all);
    RankReport {
        subset: m.ground().elements().to_vec(),
        rank: basis.len(),
        basis: basis.iter().map(|&i| m.ground().element(i).clone()).collect(),
    }
}

/// Whether no element of `subset` is a coloop of `subset`.
pub fn is_cycle<M: MatroidOracle + ?Sized>(m: &M, subset: &[EdgeInstance]) -> Result<bool> {
    if subset.is_empty() {
        return Err(Error::invalid("cycle test needs a nonempty set"));
    }
    let idx = m.ground().indices(subset)?;
    Ok(m.non_coloops(&idx).into_iter().all(|b| b))
}

/// A copy of a pattern whose instance set is not a cycle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub pattern: usize,
    pub vertex_map: Vec<Vertex>,
    pub instances: Vec<EdgeInstance>,
    pub coloops: Vec<EdgeInstance>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub matroid: String,
    /// Every copy was checked and is a cycle.
    pub verified: bool,
    /// False when a copy limit cut the enumeration short.
    pub complete: bool,
    pub copies_checked: usize,
    pub counterexample: Option<Counterexample>,
}

fn check_ground<M: MatroidOracle + ?Sized>(m: &M, host: &UniformHypergraph) -> Result<()> {
    if m.ground().host() != host {
        return Err(Error::invalid("matroid ground set is not the instance set of the host"));
    }
    Ok(())
}

fn check_copy<M: MatroidOracle + ?Sized>(m: &M, copy: &CopyImage, checked: &AtomicUsize) -> Option<Counterexample> {
    let ground = m.ground();
    let mult = ground.host().multiplicities();
    let symmetric = m.instance_symmetric();
    let mut failure = None;
    for_each_instance_choice(&copy.counts, mult, &mut |choice| {
        checked.fetch_add(1, Ordering::Relaxed);
        let set: Vec<usize> = copy
            .counts
            .iter()
            .zip(choice)
            .flat_map(|(&(pos, _), inst)| inst.iter().map(move |&i| ground.index(pos, i)))
            .collect();
        let flags = m.non_coloops(&set);
        if flags.iter().any(|&b| !b) {
            failure = Some(Counterexample {
                pattern: copy.pattern,
                vertex_map: complete_vertex_map(&copy.vertex_map, ground.host().n()),
                instances: set.iter().map(|&i| ground.element(i).clone()).collect(),
                coloops: set
                    .iter()
                    .zip(&flags)
                    .filter(|(_, &b)| !b)
                    .map(|(&i, _)| ground.element(i).clone())
                    .collect(),
            });
            return true;
        }
        symmetric
    });
    failure
}

/// Checks that every copy of every family member in `host` is a cycle of `m`.
/// With `limit`, at most that many copies are checked and the result is marked incomplete.
pub fn verify_weakly_saturated<M: MatroidOracle + ?Sized>(
    m: &M,
    host: &UniformHypergraph,
    family: &PatternFamily,
    limit: Option<usize>,
) -> Result<VerificationReport> {
    check_ground(m, host)?;
    if host.r() != family.r() {
        return Err(Error::UniformityMismatch {
            host: host.r(),
            pattern: family.r(),
        });
    }
    let groups = support_groups(host, family);
    let work: Vec<(usize, usize)> = groups
        .iter()
        .enumerate()
        .flat_map(|(g, grp)| (0..grp.image_count()).map(move |i| (g, i)))
        .collect();
    let checked = AtomicUsize::new(0);
    let mult = host.multiplicities();
    let mut complete = true;

    let counterexample = match limit {
        None => work.par_iter().find_map_first(|&(g, i)| {
            groups[g]
                .copies_on_image(i, mult, true)
                .iter()
                .find_map(|c| check_copy(m, c, &checked))
        }),
        Some(cap) => {
            let mut found = None;
            'outer: for &(g, i) in &work {
                for c in groups[g].copies_on_image(i, mult, true) {
                    if checked.load(Ordering::Relaxed) >= cap {
                        complete = false;
                        break 'outer;
                    }
                    if let Some(ce) = check_copy(m, &c, &checked) {
                        found = Some(ce);
                        break 'outer;
                    }
                }
            }
            found
        }
    };

    Ok(VerificationReport {
        matroid: m.describe(),
        verified: complete && counterexample.is_none(),
        complete,
        copies_checked: checked.into_inner(),
        counterexample,
    })
}

/// A rank bound on the weak saturation number, backed by a complete verification.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertifiedBound {
    pub matroid: String,
    pub rank: usize,
    pub basis: Vec<EdgeInstance>,
    pub copies_checked: usize,
}

pub fn certify<M: MatroidOracle + ?Sized>(
    m: &M,
    host: &UniformHypergraph,
    family: &PatternFamily,
) -> Result<CertifiedBound> {
    let report = verify_weakly_saturated(m, host, family, None)?;
    if let Some(ce) = report.counterexample {
        let shown: Vec<String> = ce.coloops.iter().map(|i| i.to_string()).collect();
        return Err(Error::Unverified(format!(
            "{}: copy of pattern {} has coloops {}",
            report.matroid,
            ce.pattern,
            shown.join(" ")
        )));
    }
    let full = full_rank(m);
    Ok(CertifiedBound {
        matroid: report.matroid,
        rank: full.rank,
        basis: full.basis,
        copies_checked: report.copies_checked,
    })
}

/// `rank(M)`, a lower bound on the weak saturation number once `M` is verified.
pub fn lower_bound<M: MatroidOracle + ?Sized>(
    m: &M,
    host: &UniformHypergraph,
    family: &PatternFamily,
) -> Result<usize> {
    Ok(certify(m, host, family)?.rank)
}

/// Whether the seed `h` spans `m`. The caller is responsible for `m` being verified
/// against `(host, family)`; then every weakly saturated seed must pass.
pub fn preservation_check<M: MatroidOracle + ?Sized>(
    m: &M,
    host: &UniformHypergraph,
    _family: &PatternFamily,
    h: &UniformHypergraph,
) -> Result<bool> {
    check_ground(m, host)?;
    let seed = m.ground().indices_of_subgraph(h)?;
    Ok(m.rank_of(&seed) == m.rank_of(&m.ground().all()))
}
