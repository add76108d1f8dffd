//! Copies of a pattern inside a host, optionally anchored at a prescribed edge.
//!
//! A copy is an injective vertex map under which every pattern edge lands on a
//! host edge of at least the pattern multiplicity. Copies are identified by
//! their image edge-instance set, so automorphic vertex maps collapse to one.
//!
//! The search is plain backtracking over pattern vertices. Vertices are placed
//! in an order that closes as many pattern edges as early as possible, and each
//! closed edge is checked against the host immediately.

use std::collections::{HashMap, HashSet};

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{binom, for_each_combination};
use crate::error::{Error, Result};
use crate::hypergraph::{Edge, EdgeInstance, PatternFamily, UniformHypergraph, Vertex};

const UNSET: u32 = u32::MAX;
const DENSE_LOOKUP_LIMIT: u64 = 1 << 22;

/// Maps sorted vertex tuples to host edge positions.
pub(crate) struct EdgeLookup {
    n: usize,
    binoms: Vec<Vec<u64>>,
    table: Table,
}

enum Table {
    Dense(Vec<u32>),
    Sparse(HashMap<u64, u32>),
}

impl EdgeLookup {
    pub(crate) fn new(host: &UniformHypergraph) -> Self {
        let (n, r) = (host.n(), host.r());
        let binoms: Vec<Vec<u64>> = (0..r)
            .map(|i| (0..=n as u64).map(|v| binom(v, i as u64 + 1)).collect())
            .collect();
        let total = binom(n as u64, r as u64);
        let table = if total <= DENSE_LOOKUP_LIMIT {
            let mut t = vec![UNSET; total as usize];
            for (pos, e) in host.edges().iter().enumerate() {
                t[e.colex_rank() as usize] = pos as u32;
            }
            Table::Dense(t)
        } else {
            Table::Sparse(
                host.edges()
                    .iter()
                    .enumerate()
                    .map(|(pos, e)| (e.colex_rank(), pos as u32))
                    .collect(),
            )
        };
        EdgeLookup { n, binoms, table }
    }

    #[inline]
    pub(crate) fn find_sorted(&self, sorted: &[u32]) -> Option<usize> {
        let mut rank = 0u64;
        for (i, &v) in sorted.iter().enumerate() {
            rank += self.binoms[i][v as usize];
        }
        match &self.table {
            Table::Dense(t) => {
                let pos = t[rank as usize];
                (pos != UNSET).then_some(pos as usize)
            }
            Table::Sparse(m) => m.get(&rank).map(|&p| p as usize),
        }
    }

    pub(crate) fn n(&self) -> usize {
        self.n
    }
}

/// A host snapshot: per-edge available counts and per-vertex distinct degrees.
pub(crate) struct HostState<'a> {
    pub lookup: &'a EdgeLookup,
    pub counts: &'a [u32],
    pub degree: &'a [u32],
}

pub(crate) fn degrees_of(host: &UniformHypergraph, counts: &[u32]) -> Vec<u32> {
    let mut deg = vec![0u32; host.n()];
    for (e, &c) in host.edges().iter().zip(counts) {
        if c > 0 {
            for &v in e.vertices() {
                deg[v as usize] += 1;
            }
        }
    }
    deg
}

struct Plan {
    order: Vec<u32>,
    /// Pattern edges whose last vertex is placed at each step.
    closes: Vec<Vec<u32>>,
}

/// A pattern preprocessed for repeated searches.
pub(crate) struct CompiledPattern {
    pub n: usize,
    pub edges: Vec<Vec<u32>>,
    pub mult: Vec<u32>,
    degree: Vec<u32>,
    free: Plan,
    anchored: Vec<Plan>,
    anchor_perms: Vec<Vec<usize>>,
}

impl CompiledPattern {
    pub(crate) fn new(p: &UniformHypergraph) -> Self {
        let edges: Vec<Vec<u32>> = p.edges().iter().map(|e| e.vertices().to_vec()).collect();
        let mut degree = vec![0u32; p.n()];
        for e in &edges {
            for &v in e {
                degree[v as usize] += 1;
            }
        }
        let free = build_plan(p.n(), &edges, &degree, &[]);
        let anchored = edges
            .iter()
            .map(|e| build_plan(p.n(), &edges, &degree, e))
            .collect();
        let anchor_perms = (0..p.r()).permutations(p.r()).collect();
        CompiledPattern {
            n: p.n(),
            edges,
            mult: p.multiplicities().to_vec(),
            degree,
            free,
            anchored,
            anchor_perms,
        }
    }
}

fn build_plan(n: usize, edges: &[Vec<u32>], degree: &[u32], prefix: &[u32]) -> Plan {
    let mut placed = vec![false; n];
    let mut order: Vec<u32> = prefix.to_vec();
    for &v in prefix {
        placed[v as usize] = true;
    }
    let active = degree.iter().filter(|&&d| d > 0).count();
    while order.len() < active {
        // Prefer vertices that close edges, then ones touching placed vertices.
        let best = (0..n)
            .filter(|&v| !placed[v] && degree[v] > 0)
            .max_by_key(|&v| {
                let mut closes = 0;
                let mut touches = 0;
                for e in edges.iter().filter(|e| e.contains(&(v as u32))) {
                    let others = e.iter().filter(|&&w| w as usize != v);
                    let placed_others = others.clone().filter(|&&w| placed[w as usize]).count();
                    if placed_others == e.len() - 1 {
                        closes += 1;
                    }
                    if placed_others > 0 {
                        touches += 1;
                    }
                }
                (closes, touches, degree[v], std::cmp::Reverse(v))
            })
            .expect("an unplaced active vertex remains");
        placed[best] = true;
        order.push(best as u32);
    }
    let mut position = vec![usize::MAX; n];
    for (i, &v) in order.iter().enumerate() {
        position[v as usize] = i;
    }
    let mut closes = vec![Vec::new(); order.len()];
    for (ei, e) in edges.iter().enumerate() {
        let last = e.iter().map(|&v| position[v as usize]).max().unwrap();
        closes[last].push(ei as u32);
    }
    Plan { order, closes }
}

struct Search<'s, 'h> {
    host: &'s HostState<'h>,
    pat: &'s CompiledPattern,
    plan: &'s Plan,
    preset: usize,
    map: Vec<u32>,
    used: Vec<bool>,
    buf: Vec<u32>,
}

impl<'s, 'h> Search<'s, 'h> {
    fn new(host: &'s HostState<'h>, pat: &'s CompiledPattern, plan: &'s Plan) -> Self {
        Search {
            host,
            pat,
            plan,
            preset: 0,
            map: vec![UNSET; pat.n],
            used: vec![false; host.lookup.n()],
            buf: Vec::with_capacity(8),
        }
    }

    #[inline]
    fn closed_edges_present(&mut self, step: usize) -> bool {
        for &ei in &self.plan.closes[step] {
            let ei = ei as usize;
            self.buf.clear();
            self.buf
                .extend(self.pat.edges[ei].iter().map(|&v| self.map[v as usize]));
            self.buf.sort_unstable();
            match self.host.lookup.find_sorted(&self.buf) {
                Some(pos) if self.host.counts[pos] >= self.pat.mult[ei] => {}
                _ => return false,
            }
        }
        true
    }

    fn run(&mut self, step: usize, visit: &mut dyn FnMut(&[u32]) -> bool) -> bool {
        if step == self.plan.order.len() {
            return visit(&self.map);
        }
        if step < self.preset {
            return self.closed_edges_present(step) && self.run(step + 1, visit);
        }
        let pv = self.plan.order[step] as usize;
        let need = self.pat.degree[pv];
        for h in 0..self.used.len() {
            if self.used[h] || self.host.degree[h] < need {
                continue;
            }
            self.map[pv] = h as u32;
            self.used[h] = true;
            let stop = self.closed_edges_present(step) && self.run(step + 1, visit);
            self.used[h] = false;
            if stop {
                self.map[pv] = UNSET;
                return true;
            }
        }
        self.map[pv] = UNSET;
        false
    }
}

/// Visits every vertex map (isolated pattern vertices left unset). Stops when `visit` returns true.
pub(crate) fn for_each_vertex_map(
    host: &HostState<'_>,
    pat: &CompiledPattern,
    visit: &mut dyn FnMut(&[u32]) -> bool,
) -> bool {
    if pat.n > host.lookup.n() {
        return false;
    }
    Search::new(host, pat, &pat.free).run(0, visit)
}

/// Is there a copy of `pat` in which some pattern edge lands on `anchor` (sorted host vertices)?
pub(crate) fn has_copy_through(
    host: &HostState<'_>,
    pat: &CompiledPattern,
    anchor: &[u32],
    anchor_count: u32,
) -> bool {
    if pat.n > host.lookup.n() {
        return false;
    }
    for (ei, pe) in pat.edges.iter().enumerate() {
        if pat.mult[ei] > anchor_count {
            continue;
        }
        let plan = &pat.anchored[ei];
        let mut search = Search::new(host, pat, plan);
        search.preset = pe.len();
        'perm: for perm in &pat.anchor_perms {
            for (j, &pv) in pe.iter().enumerate() {
                let h = anchor[perm[j]];
                if host.degree[h as usize] < pat.degree[pv as usize] {
                    for &pv in pe {
                        search.map[pv as usize] = UNSET;
                    }
                    for &h in anchor {
                        search.used[h as usize] = false;
                    }
                    continue 'perm;
                }
                search.map[pv as usize] = h;
                search.used[h as usize] = true;
            }
            if search.run(0, &mut |_| true) {
                return true;
            }
            for &pv in pe {
                search.map[pv as usize] = UNSET;
            }
            for &h in anchor {
                search.used[h as usize] = false;
            }
        }
    }
    false
}

/// A copy of a pattern: injective vertex map plus the induced instance map.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Embedding {
    pub pattern: usize,
    pub vertex_map: Vec<Vertex>,
    pub instance_map: Vec<(EdgeInstance, EdgeInstance)>,
}

impl Embedding {
    /// Host instances covered by the copy, sorted.
    pub fn host_instances(&self) -> Vec<EdgeInstance> {
        let mut v: Vec<EdgeInstance> = self.instance_map.iter().map(|(_, h)| h.clone()).collect();
        v.sort();
        v
    }
}

fn check_uniformity(host: &UniformHypergraph, pattern: &UniformHypergraph) -> Result<()> {
    if host.r() != pattern.r() {
        return Err(Error::UniformityMismatch {
            host: host.r(),
            pattern: pattern.r(),
        });
    }
    Ok(())
}

/// Does adding nothing to `host` already contain a copy of `pattern` using the edge `anchor`?
pub fn exists_copy_through(
    host: &UniformHypergraph,
    pattern: &UniformHypergraph,
    anchor: &Edge,
) -> Result<bool> {
    check_uniformity(host, pattern)?;
    let pos = host
        .position(anchor)
        .ok_or_else(|| Error::invalid(format!("anchor {anchor} is not a host edge")))?;
    let lookup = EdgeLookup::new(host);
    let counts = host.multiplicities();
    let degree = degrees_of(host, counts);
    let state = HostState {
        lookup: &lookup,
        counts,
        degree: &degree,
    };
    let pat = CompiledPattern::new(pattern);
    Ok(has_copy_through(&state, &pat, anchor.vertices(), counts[pos]))
}

/// A copy at the level of per-edge counts; instances are chosen later.
#[derive(Clone, Debug)]
pub(crate) struct CopyImage {
    pub pattern: usize,
    pub vertex_map: Vec<u32>,
    /// Host position of each pattern edge.
    pub edge_images: Vec<usize>,
    /// `(host position, required count)` sorted by position.
    pub counts: Vec<(usize, u32)>,
}

struct Labeling {
    vertex_perm: Vec<u32>,
    edge_perm: Vec<usize>,
}

struct Member {
    pattern: usize,
    mult: Vec<u32>,
    labelings: Vec<Labeling>,
}

/// Patterns sharing the same simple support, with the support's distinct images in a host.
pub(crate) struct SupportGroup {
    members: Vec<Member>,
    images: Vec<(Vec<u32>, Vec<usize>)>,
}

impl SupportGroup {
    pub(crate) fn image_count(&self) -> usize {
        self.images.len()
    }
}

/// Groups the family by support and enumerates each support's distinct images in `host`.
pub(crate) fn support_groups(host: &UniformHypergraph, family: &PatternFamily) -> Vec<SupportGroup> {
    let lookup = EdgeLookup::new(host);
    let counts = host.multiplicities();
    let degree = degrees_of(host, counts);
    let state = HostState {
        lookup: &lookup,
        counts,
        degree: &degree,
    };

    let mut groups: Vec<(UniformHypergraph, Vec<usize>)> = Vec::new();
    for (i, p) in family.patterns().iter().enumerate() {
        let s = p.support();
        match groups.iter_mut().find(|(g, _)| *g == s) {
            Some((_, members)) => members.push(i),
            None => groups.push((s, vec![i])),
        }
    }

    groups
        .into_iter()
        .map(|(support, member_ids)| {
            let compiled = CompiledPattern::new(&support);
            let automorphisms = automorphisms(&support, &compiled);
            let members = member_ids
                .into_iter()
                .map(|pattern| {
                    let mult = family.patterns()[pattern].multiplicities().to_vec();
                    let labelings = distinct_labelings(&mult, &automorphisms);
                    Member {
                        pattern,
                        mult,
                        labelings,
                    }
                })
                .collect();
            let images = distinct_images(&state, &compiled);
            SupportGroup { members, images }
        })
        .collect()
}

/// Automorphisms of a simple pattern, as vertex and edge permutations.
fn automorphisms(support: &UniformHypergraph, compiled: &CompiledPattern) -> Vec<Labeling> {
    let lookup = EdgeLookup::new(support);
    let counts = support.multiplicities();
    let degree = degrees_of(support, counts);
    let state = HostState {
        lookup: &lookup,
        counts,
        degree: &degree,
    };
    let mut out = Vec::new();
    let mut buf = Vec::new();
    for_each_vertex_map(&state, compiled, &mut |map| {
        let vertex_perm: Vec<u32> = map
            .iter()
            .enumerate()
            .map(|(v, &h)| if h == UNSET { v as u32 } else { h })
            .collect();
        let edge_perm = compiled
            .edges
            .iter()
            .map(|e| {
                buf.clear();
                buf.extend(e.iter().map(|&v| vertex_perm[v as usize]));
                buf.sort_unstable();
                lookup.find_sorted(&buf).expect("automorphism maps edges to edges")
            })
            .collect();
        out.push(Labeling {
            vertex_perm,
            edge_perm,
        });
        false
    });
    out
}

/// One automorphism per distinct relabeling `q -> mult(alpha^-1(q))`.
fn distinct_labelings(mult: &[u32], autos: &[Labeling]) -> Vec<Labeling> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for a in autos {
        let mut key = vec![0u32; mult.len()];
        for (p, &q) in a.edge_perm.iter().enumerate() {
            key[q] = mult[p];
        }
        if seen.insert(key) {
            out.push(Labeling {
                vertex_perm: a.vertex_perm.clone(),
                edge_perm: a.edge_perm.clone(),
            });
        }
    }
    out
}

/// Distinct image edge sets of a simple pattern: one representative vertex map each.
fn distinct_images(state: &HostState<'_>, compiled: &CompiledPattern) -> Vec<(Vec<u32>, Vec<usize>)> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let mut buf = Vec::new();
    for_each_vertex_map(state, compiled, &mut |map| {
        let images: Vec<usize> = compiled
            .edges
            .iter()
            .map(|e| {
                buf.clear();
                buf.extend(e.iter().map(|&v| map[v as usize]));
                buf.sort_unstable();
                state.lookup.find_sorted(&buf).expect("support edge is present")
            })
            .collect();
        let mut key = images.clone();
        key.sort_unstable();
        if seen.insert(key) {
            out.push((map.to_vec(), images));
        }
        false
    });
    out
}

impl SupportGroup {
    /// Copies of the group's patterns on image `idx`. With `merge`, copies of different
    /// members requiring identical counts are reported once (first member wins).
    pub(crate) fn copies_on_image(&self, idx: usize, host_mult: &[u32], merge: bool) -> Vec<CopyImage> {
        let (map0, images0) = &self.images[idx];
        let mut out = Vec::new();
        let mut seen: HashSet<Vec<(usize, u32)>> = HashSet::new();
        for member in &self.members {
            let mut local: HashSet<Vec<(usize, u32)>> = HashSet::new();
            for lab in &member.labelings {
                let edge_images: Vec<usize> = lab.edge_perm.iter().map(|&q| images0[q]).collect();
                if edge_images
                    .iter()
                    .zip(&member.mult)
                    .any(|(&h, &m)| host_mult[h] < m)
                {
                    continue;
                }
                let mut counts: Vec<(usize, u32)> =
                    edge_images.iter().copied().zip(member.mult.iter().copied()).collect();
                counts.sort_unstable();
                let fresh = if merge {
                    seen.insert(counts.clone())
                } else {
                    local.insert(counts.clone())
                };
                if !fresh {
                    continue;
                }
                let vertex_map = lab
                    .vertex_perm
                    .iter()
                    .map(|&w| map0[w as usize])
                    .collect();
                out.push(CopyImage {
                    pattern: member.pattern,
                    vertex_map,
                    edge_images,
                    counts,
                });
            }
        }
        out
    }
}

/// Every way to pick instances for a copy: for each `(position, count)` a `count`-subset
/// of the host instances. Stops when `f` returns true.
pub(crate) fn for_each_instance_choice(
    counts: &[(usize, u32)],
    host_mult: &[u32],
    f: &mut dyn FnMut(&[Vec<u32>]) -> bool,
) -> bool {
    let options: Vec<Vec<Vec<u32>>> = counts
        .iter()
        .map(|&(pos, need)| {
            let mut subsets = Vec::new();
            for_each_combination(host_mult[pos] as usize, need as usize, |c| {
                subsets.push(c.iter().map(|&i| i as u32).collect());
                false
            });
            subsets
        })
        .collect();
    let mut idx = vec![0usize; options.len()];
    let mut choice: Vec<Vec<u32>> = options.iter().map(|o| o[0].clone()).collect();
    loop {
        if f(&choice) {
            return true;
        }
        let mut i = 0;
        loop {
            if i == options.len() {
                return false;
            }
            idx[i] += 1;
            if idx[i] < options[i].len() {
                choice[i] = options[i][idx[i]].clone();
                break;
            }
            idx[i] = 0;
            choice[i] = options[i][0].clone();
            i += 1;
        }
    }
}

/// All copies of `pattern` in `host` up to pattern automorphism, one per distinct image
/// edge-instance set; at most `limit` when given.
pub fn enumerate_copies(
    host: &UniformHypergraph,
    pattern: &UniformHypergraph,
    limit: Option<usize>,
) -> Result<Vec<Embedding>> {
    check_uniformity(host, pattern)?;
    let family = PatternFamily::single(pattern.clone())?;
    let groups = support_groups(host, &family);
    let mult = host.multiplicities();
    let mut out = Vec::new();
    let cap = limit.unwrap_or(usize::MAX);
    for g in &groups {
        for idx in 0..g.image_count() {
            for copy in g.copies_on_image(idx, mult, false) {
                let vertex_map = complete_vertex_map(&copy.vertex_map, host.n());
                let stopped = for_each_instance_choice(&copy.counts, mult, &mut |choice| {
                    if out.len() >= cap {
                        return true;
                    }
                    out.push(build_embedding(host, pattern, &copy, &vertex_map, choice));
                    false
                });
                if stopped || out.len() >= cap {
                    return Ok(out);
                }
            }
        }
    }
    Ok(out)
}

/// Fills isolated pattern vertices with the smallest unused host vertices.
pub(crate) fn complete_vertex_map(map: &[u32], host_n: usize) -> Vec<Vertex> {
    let mut used = vec![false; host_n];
    for &h in map.iter().filter(|&&h| h != UNSET) {
        used[h as usize] = true;
    }
    let mut free = (0..host_n as u32).filter(|&h| !used[h as usize]);
    map.iter()
        .map(|&h| if h == UNSET { free.next().expect("host has room") } else { h })
        .collect()
}

fn build_embedding(
    host: &UniformHypergraph,
    pattern: &UniformHypergraph,
    copy: &CopyImage,
    vertex_map: &[Vertex],
    choice: &[Vec<u32>],
) -> Embedding {
    let mut instance_map = Vec::new();
    for (p, (pe, &m)) in pattern.edges().iter().zip(pattern.multiplicities()).enumerate() {
        let h = copy.edge_images[p];
        let slot = copy
            .counts
            .binary_search_by_key(&h, |&(pos, _)| pos)
            .expect("image edge listed");
        for i in 0..m {
            instance_map.push((
                EdgeInstance {
                    edge: pe.clone(),
                    instance: i,
                },
                EdgeInstance {
                    edge: host.edges()[h].clone(),
                    instance: choice[slot][i as usize],
                },
            ));
        }
    }
    Embedding {
        pattern: copy.pattern,
        vertex_map: vertex_map.to_vec(),
        instance_map,
    }
}
