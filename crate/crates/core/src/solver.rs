//! Exact weak saturation numbers at small scale.
//!
//! Seeds are handled as per-edge instance counts: instances of one edge are
//! interchangeable for percolation, so a seed is determined by how many instances
//! of each host edge it contains.

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::combinatorics::k_subsets_colex;
use crate::embedding::support_groups;
use crate::error::{Error, Result};
use crate::hyper_tools::sharpness;
use crate::hypergraph::{PatternFamily, UniformHypergraph};
use crate::matroid::{certify, CertifiedBound, MatroidOracle};
use crate::percolation::{hyper_construction, Percolator};

pub const EXHAUSTIVE_CAP: usize = 14;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Exhaustive,
    Bnb,
    BoundsMet,
    Bounds,
    Greedy,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WsatReport {
    /// The exact value; absent when only an interval is known.
    pub value: Option<usize>,
    pub exact: bool,
    pub lower: usize,
    pub upper: usize,
    pub method: Method,
    /// A percolating seed of size `upper`.
    pub certificate: UniformHypergraph,
    pub lower_bounds: Vec<CertifiedBound>,
    pub timed_out: bool,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct SolveOptions {
    pub timeout: Option<Duration>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum UpperStrategy {
    /// Best percolating construction, as built.
    ConstructionsOnly,
    /// Best construction, then drop instances while the seed still percolates.
    #[default]
    Prune,
}

fn check_inputs(host: &UniformHypergraph, family: &PatternFamily) -> Result<()> {
    if host.r() != family.r() {
        return Err(Error::UniformityMismatch {
            host: host.r(),
            pattern: family.r(),
        });
    }
    Ok(())
}

fn seed_of(host: &UniformHypergraph, counts: &[u32]) -> UniformHypergraph {
    UniformHypergraph::from_counts(host, counts)
}

fn exact_report(host: &UniformHypergraph, counts: &[u32], method: Method, lower_bounds: Vec<CertifiedBound>) -> WsatReport {
    let value: usize = counts.iter().map(|&c| c as usize).sum();
    WsatReport {
        value: Some(value),
        exact: true,
        lower: value,
        upper: value,
        method,
        certificate: seed_of(host, counts),
        lower_bounds,
        timed_out: false,
    }
}

/// Calls `f` on every count vector bounded by `mult` with total `k`; stops when `f` returns true.
fn for_each_count_vector(mult: &[u32], k: usize, f: &mut dyn FnMut(&[u32]) -> bool) -> bool {
    fn go(mult: &[u32], suffix: &[usize], i: usize, left: usize, cur: &mut Vec<u32>, f: &mut dyn FnMut(&[u32]) -> bool) -> bool {
        if i == mult.len() {
            return left == 0 && f(cur);
        }
        if suffix[i] < left {
            return false;
        }
        let hi = (mult[i] as usize).min(left);
        for c in (0..=hi).rev() {
            cur[i] = c as u32;
            if go(mult, suffix, i + 1, left - c, cur, f) {
                return true;
            }
        }
        cur[i] = 0;
        false
    }
    let mut suffix = vec![0usize; mult.len() + 1];
    for i in (0..mult.len()).rev() {
        suffix[i] = suffix[i + 1] + mult[i] as usize;
    }
    let mut cur = vec![0u32; mult.len()];
    go(mult, &suffix, 0, k, &mut cur, f)
}

/// Smallest percolating seed by trying all seeds in order of size.
pub fn wsat_exhaustive(host: &UniformHypergraph, family: &PatternFamily) -> Result<WsatReport> {
    check_inputs(host, family)?;
    if host.instance_count() > EXHAUSTIVE_CAP {
        return Err(Error::SizeCap {
            what: "host instance count",
            size: host.instance_count(),
            cap: EXHAUSTIVE_CAP,
        });
    }
    let perc = Percolator::new(host, family)?;
    let mult = host.multiplicities();
    for k in 0..=host.instance_count() {
        let mut found = None;
        for_each_count_vector(mult, k, &mut |c| {
            if perc.percolates_counts(c) {
                found = Some(c.to_vec());
                true
            } else {
                false
            }
        });
        if let Some(c) = found {
            return Ok(exact_report(host, &c, Method::Exhaustive, Vec::new()));
        }
    }
    unreachable!("the full host always percolates")
}

fn is_complete_uniform(host: &UniformHypergraph) -> bool {
    let total = crate::combinatorics::binom(host.n() as u64, host.r() as u64) as usize;
    let m = host.multiplicities();
    host.edge_count() == total && m.iter().all(|&x| x == m[0])
}

fn candidate_supports(host: &UniformHypergraph, family: &PatternFamily) -> Vec<Vec<Vec<u32>>> {
    let (n, r) = (host.n(), host.r());
    let mut out: Vec<Vec<Vec<u32>>> = Vec::new();
    for f in family.patterns() {
        let simple = f.support();
        if let Ok(w) = sharpness(&simple) {
            if let Ok(h) = hyper_construction(n, &simple, w.value) {
                out.push(h.edges().iter().map(|e| e.vertices().to_vec()).collect());
            }
        }
    }
    for t in r..=n {
        let mut edges = Vec::new();
        let mut start = 0;
        while start < n {
            let size = t.min(n - start);
            for e in k_subsets_colex(size, r) {
                edges.push(e.iter().map(|&x| x + start as u32).collect());
            }
            start += size;
        }
        out.push(edges);
    }
    out
}

/// A small percolating seed from the known constructions.
pub fn greedy_upper(host: &UniformHypergraph, family: &PatternFamily, strategy: UpperStrategy) -> Result<WsatReport> {
    check_inputs(host, family)?;
    let perc = Percolator::new(host, family)?;
    let mult = host.multiplicities();
    let mut best = mult.to_vec();
    let mut best_size: usize = host.instance_count();
    for edges in candidate_supports(host, family) {
        let mut counts = vec![0u32; mult.len()];
        for e in edges {
            if let Some(pos) = host.position(&crate::hypergraph::Edge::new(e).expect("distinct vertices")) {
                counts[pos] = mult[pos];
            }
        }
        let size: usize = counts.iter().map(|&c| c as usize).sum();
        if size < best_size && perc.percolates_counts(&counts) {
            best = counts;
            best_size = size;
        }
    }
    if strategy == UpperStrategy::Prune {
        for pos in (0..best.len()).rev() {
            while best[pos] > 0 {
                best[pos] -= 1;
                if !perc.percolates_counts(&best) {
                    best[pos] += 1;
                    break;
                }
            }
        }
    }
    let size: usize = best.iter().map(|&c| c as usize).sum();
    Ok(WsatReport {
        value: None,
        exact: false,
        lower: 0,
        upper: size,
        method: Method::Greedy,
        certificate: seed_of(host, &best),
        lower_bounds: Vec::new(),
        timed_out: false,
    })
}

fn certify_all(host: &UniformHypergraph, family: &PatternFamily, oracles: &[&dyn MatroidOracle]) -> Result<Vec<CertifiedBound>> {
    oracles.iter().map(|m| certify(*m, host, family)).collect()
}

/// Certified lower bounds against the greedy upper bound; exact only when they meet.
pub fn wsat_bounds(host: &UniformHypergraph, family: &PatternFamily, oracles: &[&dyn MatroidOracle]) -> Result<WsatReport> {
    let bounds = certify_all(host, family, oracles)?;
    let mut rep = greedy_upper(host, family, UpperStrategy::Prune)?;
    rep.lower = bounds.iter().map(|b| b.rank).max().unwrap_or(0);
    rep.lower_bounds = bounds;
    if rep.lower == rep.upper {
        rep.value = Some(rep.upper);
        rep.exact = true;
        rep.method = Method::BoundsMet;
    } else {
        rep.method = Method::Bounds;
    }
    Ok(rep)
}

/// Number of pattern copies using each host edge (count-level copies, all family members).
fn copies_per_position(host: &UniformHypergraph, family: &PatternFamily) -> Vec<usize> {
    let mut out = vec![0usize; host.edge_count()];
    for g in support_groups(host, family) {
        for i in 0..g.image_count() {
            for c in g.copies_on_image(i, host.multiplicities(), false) {
                for &(pos, _) in &c.counts {
                    out[pos] += 1;
                }
            }
        }
    }
    out
}

struct Bnb<'a> {
    perc: Percolator<'a>,
    mult: Vec<u32>,
    order: Vec<usize>,
    oracles: Vec<(&'a dyn MatroidOracle, usize)>,
    incumbent: usize,
    best: Vec<u32>,
    deadline: Option<Instant>,
    timed_out: bool,
}

impl Bnb<'_> {
    fn seed_rank_gap(&self, counts: &[u32]) -> usize {
        self.oracles
            .iter()
            .map(|&(m, full)| {
                let idx = m.ground().indices_of_subgraph(&UniformHypergraph::from_counts(self.perc.host(), counts)).expect("seed inside host");
                full - m.rank_of(&idx)
            })
            .max()
            .unwrap_or(0)
    }

    /// `counts` holds decisions for `order[..depth]` and full multiplicity beyond.
    fn search(&mut self, depth: usize, counts: &mut Vec<u32>, decided: usize, min_first: u32) {
        if self.timed_out {
            return;
        }
        if let Some(d) = self.deadline {
            if Instant::now() > d {
                self.timed_out = true;
                return;
            }
        }
        if decided >= self.incumbent {
            return;
        }
        if !self.perc.percolates_counts(counts) {
            return;
        }
        if depth == self.order.len() {
            self.incumbent = decided;
            self.best = counts.clone();
            return;
        }
        if !self.oracles.is_empty() {
            let mut seed = counts.clone();
            for &pos in &self.order[depth..] {
                seed[pos] = 0;
            }
            if decided + self.seed_rank_gap(&seed) >= self.incumbent {
                return;
            }
        }
        let pos = self.order[depth];
        let lo = if depth == 0 { min_first } else { 0 };
        for c in lo..=self.mult[pos] {
            counts[pos] = c;
            self.search(depth + 1, counts, decided + c as usize, min_first);
            if self.timed_out {
                break;
            }
        }
        counts[pos] = self.mult[pos];
    }
}

/// Exact value by branch and bound, pruned by percolation of the optimistic completion,
/// the incumbent, and the rank deficit of every certified matroid.
pub fn wsat_bnb(
    host: &UniformHypergraph,
    family: &PatternFamily,
    oracles: &[&dyn MatroidOracle],
    opts: SolveOptions,
) -> Result<WsatReport> {
    check_inputs(host, family)?;
    let bounds = certify_all(host, family, oracles)?;
    let upper = greedy_upper(host, family, UpperStrategy::Prune)?;
    let lower = bounds.iter().map(|b| b.rank).max().unwrap_or(0);
    let deadline = opts.timeout.map(|t| Instant::now() + t);

    let perc = Percolator::new(host, family)?;
    let mult = host.multiplicities().to_vec();
    let mut best = upper.certificate.counts_over(host)?;
    let mut incumbent = upper.upper;
    let mut timed_out = false;

    if lower < incumbent {
        let zero = vec![0u32; mult.len()];
        if perc.percolates_counts(&zero) {
            best = zero;
            incumbent = 0;
        } else {
            let weights = copies_per_position(host, family);
            let mut order: Vec<usize> = (0..mult.len()).collect();
            order.sort_by_key(|&p| (std::cmp::Reverse(weights[p]), p));
            // Every edge of a complete host with equal multiplicities is equivalent, and some
            // instance lies in any nonempty seed, so the first edge may be assumed present.
            let min_first = u32::from(is_complete_uniform(host));
            let mut bnb = Bnb {
                perc,
                mult: mult.clone(),
                order,
                oracles: oracles.iter().zip(&bounds).map(|(m, b)| (*m, b.rank)).collect(),
                incumbent,
                best: best.clone(),
                deadline,
                timed_out: false,
            };
            let mut counts = mult.clone();
            bnb.search(0, &mut counts, 0, min_first);
            incumbent = bnb.incumbent;
            best = bnb.best;
            timed_out = bnb.timed_out;
        }
    }

    let certificate = seed_of(host, &best);
    let perc = Percolator::new(host, family)?;
    if !perc.percolates_counts(&best) {
        return Err(Error::Percolation("solver certificate does not percolate".into()));
    }
    if incumbent < lower {
        return Err(Error::Percolation(format!("seed of size {incumbent} beats the certified bound {lower}")));
    }
    let exact = !timed_out;
    Ok(WsatReport {
        value: exact.then_some(incumbent),
        exact,
        lower: if exact { incumbent } else { lower },
        upper: incumbent,
        method: if exact && lower == upper.upper { Method::BoundsMet } else { Method::Bnb },
        certificate,
        lower_bounds: bounds,
        timed_out,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::count_matroid::CountMatroid;
    use crate::linear_matroid::hyperconnectivity;
    use crate::patterns::{make_clique, make_cycle, make_dumbbell};
    use crate::percolation::is_weakly_saturated;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn fam(p: UniformHypergraph) -> PatternFamily {
        PatternFamily::single(p).unwrap()
    }

    #[test]
    fn exhaustive_clique_values() {
        let k3 = fam(make_clique(3, 2).unwrap());
        assert_eq!(wsat_exhaustive(&make_clique(5, 2).unwrap(), &k3).unwrap().value, Some(4));
        let k4 = fam(make_clique(4, 2).unwrap());
        assert_eq!(wsat_exhaustive(&make_clique(4, 2).unwrap(), &k4).unwrap().value, Some(5));
        let k43 = fam(make_clique(4, 3).unwrap());
        let rep = wsat_exhaustive(&make_clique(5, 3).unwrap(), &k43).unwrap();
        assert_eq!(rep.value, Some(6));
        assert!(is_weakly_saturated(&make_clique(5, 3).unwrap(), &rep.certificate, &k43).unwrap());
        assert!(matches!(
            wsat_exhaustive(&make_clique(6, 2).unwrap(), &k3),
            Err(Error::SizeCap { .. })
        ));
    }

    #[test]
    fn bnb_values() {
        let k6 = make_clique(6, 2).unwrap();
        let b3 = fam(make_dumbbell(3).unwrap());
        let rep = wsat_bnb(&k6, &b3, &[], SolveOptions::default()).unwrap();
        assert_eq!(rep.value, Some(6));
        let k3 = fam(make_clique(3, 2).unwrap());
        let rep = wsat_bnb(&k6, &k3, &[], SolveOptions::default()).unwrap();
        assert_eq!(rep.value, Some(5));
        assert_eq!(rep.certificate.edge_count(), 5);
    }

    #[test]
    fn bnb_with_matroid_pruning() {
        let k6 = make_clique(6, 2).unwrap();
        let k4 = fam(make_clique(4, 2).unwrap());
        let va = hyperconnectivity(6, 2, crate::field::DEFAULT_PRIME, 1).unwrap();
        let rep = wsat_bnb(&k6, &k4, &[&va], SolveOptions::default()).unwrap();
        assert_eq!(rep.value, Some(9));
        assert_eq!(rep.lower_bounds[0].rank, 9);
        let plain = wsat_bnb(&k6, &k4, &[], SolveOptions::default()).unwrap();
        assert_eq!(plain.value, Some(9));
    }

    #[test]
    fn unverified_oracle_is_rejected() {
        let k5 = make_clique(5, 2).unwrap();
        let free = crate::matroid::FreeMatroid::new(&k5);
        let k3 = fam(make_clique(3, 2).unwrap());
        assert!(matches!(wsat_bnb(&k5, &k3, &[&free], SolveOptions::default()), Err(Error::Unverified(_))));
    }

    #[test]
    fn greedy_upper_examples() {
        let k6 = make_clique(6, 2).unwrap();
        let rep = greedy_upper(&k6, &fam(make_dumbbell(3).unwrap()), UpperStrategy::ConstructionsOnly).unwrap();
        assert_eq!(rep.upper, 6);
        let rep = greedy_upper(&k6, &fam(make_clique(3, 2).unwrap()), UpperStrategy::Prune).unwrap();
        assert!(rep.upper <= 12);
        let k63 = make_clique(6, 3).unwrap();
        let k43 = fam(make_clique(4, 3).unwrap());
        let rep = greedy_upper(&k63, &k43, UpperStrategy::ConstructionsOnly).unwrap();
        assert!(is_weakly_saturated(&k63, &rep.certificate, &k43).unwrap());
        assert_eq!(rep.upper, rep.certificate.instance_count());
    }

    #[test]
    fn bounds_mode_meets_on_dumbbells() {
        let k6 = make_clique(6, 2).unwrap();
        let b3 = fam(make_dumbbell(3).unwrap());
        // Without a certified matroid only the upper bound is known.
        let rep = wsat_bounds(&k6, &b3, &[]).unwrap();
        assert_eq!((rep.lower, rep.upper, rep.exact), (0, 6, false));
        let k5 = make_clique(5, 2).unwrap();
        let va = hyperconnectivity(5, 1, crate::field::DEFAULT_PRIME, 0).unwrap();
        let rep = wsat_bounds(&k5, &fam(make_clique(3, 2).unwrap()), &[&va]).unwrap();
        assert_eq!((rep.value, rep.method), (Some(4), Method::BoundsMet));
    }

    #[test]
    fn timeout_reports_an_interval() {
        let k7 = make_clique(7, 2).unwrap();
        let c4 = fam(make_cycle(4).unwrap());
        let rep = wsat_bnb(&k7, &c4, &[], SolveOptions { timeout: Some(Duration::ZERO) }).unwrap();
        assert!(rep.timed_out && !rep.exact && rep.value.is_none());
        assert!(rep.lower <= rep.upper);
    }

    fn random_host(rng: &mut ChaCha8Rng) -> UniformHypergraph {
        let n = rng.gen_range(4..=6);
        let edges: Vec<(Vec<u32>, u32)> = k_subsets_colex(n, 2)
            .into_iter()
            .filter_map(|e| rng.gen_bool(0.7).then(|| (e, if rng.gen_bool(0.15) { 2 } else { 1 })))
            .take(EXHAUSTIVE_CAP - 2)
            .collect();
        UniformHypergraph::from_multiedges(2, n, edges).unwrap()
    }

    #[test]
    fn bnb_agrees_with_exhaustive() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let patterns = [make_clique(3, 2).unwrap(), make_cycle(4).unwrap(), UniformHypergraph::from_edges(2, 3, [vec![0, 1], vec![1, 2]]).unwrap()];
        for _ in 0..25 {
            let host = random_host(&mut rng);
            for p in &patterns {
                let f = fam(p.clone());
                let a = wsat_exhaustive(&host, &f).unwrap().value;
                let b = wsat_bnb(&host, &f, &[], SolveOptions::default()).unwrap().value;
                assert_eq!(a, b, "{host:?} {p:?}");
            }
        }
        let k4 = make_clique(4, 2).unwrap();
        let two = crate::patterns::with_multiplicity(&k4, 2).unwrap();
        let lifted = crate::patterns::lift_family(&make_clique(3, 2).unwrap(), 2).unwrap();
        let a = wsat_exhaustive(&two, &lifted).unwrap().value;
        let b = wsat_bnb(&two, &lifted, &[], SolveOptions::default()).unwrap().value;
        assert_eq!(a, b);
        let cm = CountMatroid::new(&two, 1).unwrap();
        let c = wsat_bnb(&two, &lifted, &[&cm], SolveOptions::default()).unwrap().value;
        assert_eq!(a, c);
    }

    #[test]
    fn optimistic_completion_pruning_is_sound() {
        // If seed ∪ undecided fails to percolate, so does every seed between them.
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let k6 = make_clique(6, 2).unwrap();
        let family = fam(make_dumbbell(3).unwrap());
        let perc = Percolator::new(&k6, &family).unwrap();
        for _ in 0..200 {
            let upper: Vec<u32> = (0..15).map(|_| u32::from(rng.gen_bool(0.6))).collect();
            if perc.percolates_counts(&upper) {
                continue;
            }
            let lower: Vec<u32> = upper.iter().map(|&c| if c == 1 && rng.gen_bool(0.5) { 1 } else { 0 }).collect();
            assert!(!perc.percolates_counts(&lower));
        }
    }
}
