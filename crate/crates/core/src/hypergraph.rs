//! Uniform hypergraphs with edge multiplicities.
//!
//! Graphs are the `r = 2` case and multigraphs carry a multiplicity per edge.
//! Edges are kept in colex order, so the position of an edge inside a
//! hypergraph doubles as a dense index for per-edge arrays.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::combinatorics::colex_rank;
use crate::error::{Error, Result};

pub type Vertex = u32;

/// A strictly increasing tuple of vertices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vertex>", into = "Vec<Vertex>")]
pub struct Edge(Vec<Vertex>);

impl Edge {
    /// Builds an edge from vertices in any order. Repeated vertices are rejected.
    pub fn new(mut vertices: Vec<Vertex>) -> Result<Self> {
        vertices.sort_unstable();
        if vertices.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::invalid(format!(
                "edge {vertices:?} repeats a vertex"
            )));
        }
        Ok(Edge(vertices))
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn colex_rank(&self) -> u64 {
        colex_rank(&self.0)
    }

    /// Key used in vector-assignment files: vertices joined by commas.
    pub fn key(&self) -> String {
        self.0
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

impl TryFrom<Vec<Vertex>> for Edge {
    type Error = Error;

    fn try_from(v: Vec<Vertex>) -> Result<Self> {
        Edge::new(v)
    }
}

impl From<Edge> for Vec<Vertex> {
    fn from(e: Edge) -> Self {
        e.0
    }
}

impl Ord for Edge {
    /// Colex order among edges of equal size; shorter edges first.
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.iter().rev().cmp(other.0.iter().rev()))
    }
}

impl PartialOrd for Edge {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.key())
    }
}

/// One instance of a (multi)edge. Distinct instances are distinct matroid elements.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EdgeInstance {
    pub edge: Edge,
    pub instance: u32,
}

impl fmt::Display for EdgeInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}#{}", self.edge, self.instance)
    }
}

/// An `r`-uniform hypergraph on vertices `0..n` with positive edge multiplicities.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "HypergraphRepr", into = "HypergraphRepr")]
pub struct UniformHypergraph {
    r: usize,
    n: usize,
    edges: Vec<Edge>,
    mult: Vec<u32>,
}

impl UniformHypergraph {
    /// The edgeless hypergraph.
    pub fn empty(r: usize, n: usize) -> Result<Self> {
        if r < 2 {
            return Err(Error::invalid(format!("uniformity must be at least 2, got {r}")));
        }
        Ok(UniformHypergraph {
            r,
            n,
            edges: Vec::new(),
            mult: Vec::new(),
        })
    }

    /// A simple hypergraph; duplicate edges are rejected.
    pub fn from_edges<I, E>(r: usize, n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = E>,
        E: Into<Vec<Vertex>>,
    {
        Self::from_multiedges(r, n, edges.into_iter().map(|e| (e, 1)))
    }

    /// A multi-hypergraph from `(edge, multiplicity)` pairs; duplicate edges are rejected.
    pub fn from_multiedges<I, E>(r: usize, n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (E, u32)>,
        E: Into<Vec<Vertex>>,
    {
        let mut map = BTreeMap::new();
        for (e, m) in edges {
            let edge = Self::checked_edge(r, n, e.into())?;
            if m == 0 {
                return Err(Error::invalid(format!("edge {edge} has multiplicity 0")));
            }
            if map.insert(edge.clone(), m).is_some() {
                return Err(Error::invalid(format!("duplicate edge {edge}")));
            }
        }
        let mut h = Self::empty(r, n)?;
        for (e, m) in map {
            h.edges.push(e);
            h.mult.push(m);
        }
        Ok(h)
    }

    /// Builds from per-edge counts over `reference`'s edges, dropping zero counts.
    pub(crate) fn from_counts(reference: &UniformHypergraph, counts: &[u32]) -> Self {
        debug_assert_eq!(counts.len(), reference.edges.len());
        let mut h = UniformHypergraph {
            r: reference.r,
            n: reference.n,
            edges: Vec::new(),
            mult: Vec::new(),
        };
        for (e, &c) in reference.edges.iter().zip(counts) {
            if c > 0 {
                h.edges.push(e.clone());
                h.mult.push(c);
            }
        }
        h
    }

    pub(crate) fn checked_edge(r: usize, n: usize, vertices: Vec<Vertex>) -> Result<Edge> {
        if vertices.len() != r {
            return Err(Error::invalid(format!(
                "edge {vertices:?} has {} vertices, expected {r}",
                vertices.len()
            )));
        }
        if let Some(&v) = vertices.iter().find(|&&v| v as usize >= n) {
            return Err(Error::invalid(format!(
                "vertex {v} out of range for n = {n}"
            )));
        }
        Edge::new(vertices)
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Distinct edges in colex order.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn multiplicities(&self) -> &[u32] {
        &self.mult
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Edge, u32)> + '_ {
        self.edges.iter().zip(self.mult.iter().copied())
    }

    /// Number of distinct edges.
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Number of edge instances, counting multiplicity.
    pub fn instance_count(&self) -> usize {
        self.mult.iter().map(|&m| m as usize).sum()
    }

    pub fn is_simple(&self) -> bool {
        self.mult.iter().all(|&m| m == 1)
    }

    /// Position of `edge` in the colex edge list.
    pub fn position(&self, edge: &Edge) -> Option<usize> {
        self.edges.binary_search(edge).ok()
    }

    pub fn multiplicity(&self, edge: &Edge) -> u32 {
        self.position(edge).map_or(0, |i| self.mult[i])
    }

    /// Number of distinct edges containing `v`.
    pub fn degree(&self, v: Vertex) -> usize {
        self.edges.iter().filter(|e| e.contains(v)).count()
    }

    /// Every edge instance, edges in colex order and instances ascending.
    pub fn instances(&self) -> Vec<EdgeInstance> {
        self.iter()
            .flat_map(|(e, m)| {
                (0..m).map(move |i| EdgeInstance {
                    edge: e.clone(),
                    instance: i,
                })
            })
            .collect()
    }

    /// Vertices incident to at least one edge.
    pub fn touched_vertices(&self) -> Vec<Vertex> {
        let mut seen = vec![false; self.n];
        for e in &self.edges {
            for &v in e.vertices() {
                seen[v as usize] = true;
            }
        }
        (0..self.n as Vertex).filter(|&v| seen[v as usize]).collect()
    }

    /// Same edges with every multiplicity set to one.
    pub fn support(&self) -> UniformHypergraph {
        UniformHypergraph {
            r: self.r,
            n: self.n,
            edges: self.edges.clone(),
            mult: vec![1; self.edges.len()],
        }
    }

    /// Edgewise and multiplicity-wise containment on the same vertex set.
    pub fn is_subgraph_of(&self, host: &UniformHypergraph) -> bool {
        self.r == host.r
            && self.n == host.n
            && self.iter().all(|(e, m)| host.multiplicity(e) >= m)
    }

    /// Per-edge counts of `self` laid out over `host`'s edge positions.
    pub fn counts_over(&self, host: &UniformHypergraph) -> Result<Vec<u32>> {
        if self.r != host.r || self.n != host.n {
            return Err(Error::invalid(format!(
                "sub-hypergraph (r={}, n={}) does not live on host (r={}, n={})",
                self.r, self.n, host.r, host.n
            )));
        }
        let mut counts = vec![0u32; host.edges.len()];
        for (e, m) in self.iter() {
            match host.position(e) {
                Some(i) if host.mult[i] >= m => counts[i] = m,
                _ => {
                    return Err(Error::invalid(format!(
                        "edge {e} with multiplicity {m} is not in the host"
                    )))
                }
            }
        }
        Ok(counts)
    }

    /// Disjoint union; `other`'s vertices are shifted by `self.n()`.
    pub fn disjoint_union(&self, other: &UniformHypergraph) -> Result<UniformHypergraph> {
        if self.r != other.r {
            return Err(Error::UniformityMismatch {
                host: self.r,
                pattern: other.r,
            });
        }
        let shift = self.n as Vertex;
        let edges = self
            .iter()
            .map(|(e, m)| (e.vertices().to_vec(), m))
            .chain(
                other
                    .iter()
                    .map(|(e, m)| (e.vertices().iter().map(|v| v + shift).collect(), m)),
            );
        UniformHypergraph::from_multiedges(self.r, self.n + other.n, edges)
    }
}

#[derive(Serialize, Deserialize)]
struct HypergraphRepr {
    r: usize,
    n: usize,
    edges: Vec<Vec<Vertex>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    multiplicity: Option<Vec<u32>>,
}

impl TryFrom<HypergraphRepr> for UniformHypergraph {
    type Error = Error;

    fn try_from(repr: HypergraphRepr) -> Result<Self> {
        let mult = match repr.multiplicity {
            Some(m) if m.len() != repr.edges.len() => {
                return Err(Error::invalid(format!(
                    "{} multiplicities for {} edges",
                    m.len(),
                    repr.edges.len()
                )))
            }
            Some(m) => m,
            None => vec![1; repr.edges.len()],
        };
        UniformHypergraph::from_multiedges(repr.r, repr.n, repr.edges.into_iter().zip(mult))
    }
}

impl From<UniformHypergraph> for HypergraphRepr {
    fn from(h: UniformHypergraph) -> Self {
        let simple = h.is_simple();
        HypergraphRepr {
            r: h.r,
            n: h.n,
            edges: h.edges.into_iter().map(Vec::from).collect(),
            multiplicity: if simple { None } else { Some(h.mult) },
        }
    }
}

/// A family of patterns sharing one uniformity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternFamily {
    r: usize,
    patterns: Vec<UniformHypergraph>,
    labels: Vec<Option<String>>,
}

impl PatternFamily {
    pub fn new(patterns: Vec<UniformHypergraph>) -> Result<Self> {
        let labels = vec![None; patterns.len()];
        Self::with_labels(patterns, labels)
    }

    pub fn with_labels(patterns: Vec<UniformHypergraph>, labels: Vec<Option<String>>) -> Result<Self> {
        let first = patterns
            .first()
            .ok_or_else(|| Error::invalid("pattern family is empty"))?;
        let r = first.r();
        if labels.len() != patterns.len() {
            return Err(Error::invalid("one label slot per pattern is required"));
        }
        for (i, p) in patterns.iter().enumerate() {
            if p.r() != r {
                return Err(Error::UniformityMismatch {
                    host: r,
                    pattern: p.r(),
                });
            }
            if p.edge_count() == 0 {
                return Err(Error::invalid(format!("pattern {i} has no edges")));
            }
        }
        Ok(PatternFamily {
            r,
            patterns,
            labels,
        })
    }

    pub fn single(pattern: UniformHypergraph) -> Result<Self> {
        Self::new(vec![pattern])
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn patterns(&self) -> &[UniformHypergraph] {
        &self.patterns
    }

    pub fn labels(&self) -> &[Option<String>] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    /// Largest pattern vertex count.
    pub fn max_vertices(&self) -> usize {
        self.patterns.iter().map(|p| p.n()).max().unwrap_or(0)
    }
}

#[derive(Serialize, Deserialize)]
struct LabeledPattern {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    label: Option<String>,
    #[serde(flatten)]
    pattern: UniformHypergraph,
}

impl Serialize for PatternFamily {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let list: Vec<LabeledPattern> = self
            .patterns
            .iter()
            .zip(&self.labels)
            .map(|(p, l)| LabeledPattern {
                label: l.clone(),
                pattern: p.clone(),
            })
            .collect();
        list.serialize(s)
    }
}

impl<'de> Deserialize<'de> for PatternFamily {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let list = Vec::<LabeledPattern>::deserialize(d)?;
        let (patterns, labels) = list.into_iter().map(|lp| (lp.pattern, lp.label)).unzip();
        PatternFamily::with_labels(patterns, labels).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edges_are_sorted_and_colex_ordered() {
        let h = UniformHypergraph::from_edges(2, 4, [vec![2, 3], vec![1, 0], vec![0, 2]]).unwrap();
        let listed: Vec<Vec<u32>> = h.edges().iter().map(|e| e.vertices().to_vec()).collect();
        assert_eq!(listed, vec![vec![0, 1], vec![0, 2], vec![2, 3]]);
    }

    #[test]
    fn rejects_bad_edges() {
        assert!(UniformHypergraph::from_edges(2, 3, [vec![0, 3]]).is_err());
        assert!(UniformHypergraph::from_edges(2, 3, [vec![1, 1]]).is_err());
        assert!(UniformHypergraph::from_edges(3, 4, [vec![0, 1]]).is_err());
        assert!(UniformHypergraph::from_edges(2, 3, [vec![0, 1], vec![1, 0]]).is_err());
        assert!(UniformHypergraph::from_multiedges(2, 3, [(vec![0, 1], 0)]).is_err());
        assert!(UniformHypergraph::empty(1, 3).is_err());
    }

    #[test]
    fn instances_enumerate_multiplicity() {
        let h = UniformHypergraph::from_multiedges(2, 3, [(vec![0, 1], 3), (vec![1, 2], 1)]).unwrap();
        assert_eq!(h.instance_count(), 4);
        assert_eq!(h.edge_count(), 2);
        let inst = h.instances();
        assert_eq!(inst[2].instance, 2);
        assert_eq!(inst[3].edge.vertices(), &[1, 2]);
        assert!(!h.is_simple());
        assert!(h.support().is_simple());
    }

    #[test]
    fn json_omits_unit_multiplicities() {
        let h = UniformHypergraph::from_edges(2, 3, [vec![0, 1]]).unwrap();
        let s = serde_json::to_string(&h).unwrap();
        assert_eq!(s, r#"{"r":2,"n":3,"edges":[[0,1]]}"#);
        let back: UniformHypergraph = serde_json::from_str(&s).unwrap();
        assert_eq!(back, h);
        let bad = r#"{"r":2,"n":3,"edges":[[0,5]]}"#;
        assert!(serde_json::from_str::<UniformHypergraph>(bad).is_err());
    }

    #[test]
    fn family_requires_shared_uniformity() {
        let g = UniformHypergraph::from_edges(2, 3, [vec![0, 1]]).unwrap();
        let h = UniformHypergraph::from_edges(3, 3, [vec![0, 1, 2]]).unwrap();
        assert!(PatternFamily::new(vec![g.clone(), h]).is_err());
        assert!(PatternFamily::new(vec![UniformHypergraph::empty(2, 3).unwrap()]).is_err());
        let fam = PatternFamily::with_labels(vec![g], vec![Some("edge".into())]).unwrap();
        let s = serde_json::to_string(&fam).unwrap();
        let back: PatternFamily = serde_json::from_str(&s).unwrap();
        assert_eq!(back, fam);
    }

    #[test]
    fn subgraph_counts() {
        let host = UniformHypergraph::from_multiedges(2, 3, [(vec![0, 1], 2), (vec![1, 2], 1)]).unwrap();
        let sub = UniformHypergraph::from_multiedges(2, 3, [(vec![0, 1], 1)]).unwrap();
        assert!(sub.is_subgraph_of(&host));
        assert_eq!(sub.counts_over(&host).unwrap(), vec![1, 0]);
        let too_many = UniformHypergraph::from_multiedges(2, 3, [(vec![1, 2], 2)]).unwrap();
        assert!(!too_many.is_subgraph_of(&host));
        assert!(too_many.counts_over(&host).is_err());
    }
}
