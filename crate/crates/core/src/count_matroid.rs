//! The count matroid: `I` is independent when `|I'| <= q * v(I')` for every `I' ⊆ I`.
//!
//! By Hall's theorem this holds exactly when every element of `I` can be assigned to
//! one of its vertices with no vertex receiving more than `q` elements, so
//! independence is a capacitated bipartite matching grown by augmenting paths.

use std::collections::{HashMap, HashSet, VecDeque};

use crate::error::{Error, Result};
use crate::hypergraph::UniformHypergraph;
use crate::matroid::{GroundSet, MatroidOracle};

pub const BRUTE_FORCE_CAP: usize = 20;

const UNASSIGNED: u32 = u32::MAX;
const UNSEEN: usize = usize::MAX;

pub struct CountMatroid {
    ground: GroundSet,
    q: u32,
    ends: Vec<Vec<u32>>,
}

/// Elements assigned to vertices with capacity `q`, grown one element at a time.
struct Orientation<'a> {
    ends: &'a [Vec<u32>],
    q: usize,
    at: Vec<Vec<usize>>,
    owner: Vec<u32>,
    via: Vec<usize>,
}

impl<'a> Orientation<'a> {
    fn new(cm: &'a CountMatroid) -> Self {
        let n = cm.ground.host().n();
        Orientation {
            ends: &cm.ends,
            q: cm.q as usize,
            at: vec![Vec::new(); n],
            owner: vec![UNASSIGNED; cm.ends.len()],
            via: vec![UNSEEN; n],
        }
    }

    /// Assigns `e`, rerouting along an alternating path if needed.
    /// On failure the assignment is unchanged.
    fn insert(&mut self, e: usize) -> bool {
        self.via.iter_mut().for_each(|x| *x = UNSEEN);
        let mut queue = VecDeque::new();
        for &v in &self.ends[e] {
            if self.via[v as usize] == UNSEEN {
                self.via[v as usize] = e;
                queue.push_back(v);
            }
        }
        while let Some(v) = queue.pop_front() {
            if self.at[v as usize].len() < self.q {
                self.augment(v, e);
                return true;
            }
            for &f in &self.at[v as usize] {
                for &w in &self.ends[f] {
                    if self.via[w as usize] == UNSEEN {
                        self.via[w as usize] = f;
                        queue.push_back(w);
                    }
                }
            }
        }
        false
    }

    fn augment(&mut self, mut target: u32, e: usize) {
        loop {
            let f = self.via[target as usize];
            let old = std::mem::replace(&mut self.owner[f], target);
            self.at[target as usize].push(f);
            if f == e {
                return;
            }
            let slot = &mut self.at[old as usize];
            let i = slot.iter().position(|&x| x == f).expect("owner lists the element");
            slot.swap_remove(i);
            target = old;
        }
    }
}

impl CountMatroid {
    pub fn new(host: &UniformHypergraph, q: u32) -> Result<Self> {
        if q == 0 {
            return Err(Error::invalid("count matroid capacity must be positive"));
        }
        let ground = GroundSet::new(host);
        let ends = ground.elements().iter().map(|i| i.edge.vertices().to_vec()).collect();
        Ok(CountMatroid { ground, q, ends })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    fn check_size(set: &[usize]) -> Result<()> {
        if set.len() > BRUTE_FORCE_CAP {
            return Err(Error::SizeCap {
                what: "brute-force subset",
                size: set.len(),
                cap: BRUTE_FORCE_CAP,
            });
        }
        Ok(())
    }

    /// Per-subset vertex masks over a local relabeling of the touched vertices.
    fn vertex_masks(&self, set: &[usize]) -> Vec<u128> {
        let mut local: HashMap<u32, u32> = HashMap::new();
        let bits: Vec<u128> = set
            .iter()
            .map(|&e| {
                self.ends[e].iter().fold(0u128, |acc, v| {
                    let next = local.len() as u32;
                    let id = *local.entry(*v).or_insert(next);
                    acc | (1u128 << id)
                })
            })
            .collect();
        let mut masks = vec![0u128; 1 << set.len()];
        for mask in 1..masks.len() {
            let low = mask.trailing_zeros() as usize;
            masks[mask] = masks[mask & (mask - 1)] | bits[low];
        }
        masks
    }

    /// The count condition checked on every subset of `set` directly.
    pub fn brute_force_is_independent(&self, set: &[usize]) -> Result<bool> {
        Self::check_size(set)?;
        let masks = self.vertex_masks(set);
        let q = self.q as u64;
        Ok((1..masks.len()).all(|m| u64::from(m.count_ones()) <= q * u64::from(masks[m].count_ones())))
    }

    /// Largest subset of `set` all of whose subsets satisfy the count condition.
    pub fn brute_force_rank(&self, set: &[usize]) -> Result<usize> {
        Self::check_size(set)?;
        let masks = self.vertex_masks(set);
        let q = self.q as u64;
        let mut ok = vec![false; masks.len()];
        ok[0] = true;
        let mut best = 0;
        for m in 1..masks.len() {
            let size = m.count_ones();
            let mut good = u64::from(size) <= q * u64::from(masks[m].count_ones());
            let mut rest = m;
            while good && rest != 0 {
                let bit = rest & rest.wrapping_neg();
                good = ok[m ^ bit];
                rest ^= bit;
            }
            ok[m] = good;
            if good {
                best = best.max(size as usize);
            }
        }
        Ok(best)
    }
}

impl MatroidOracle for CountMatroid {
    fn ground(&self) -> &GroundSet {
        &self.ground
    }

    fn is_independent(&self, set: &[usize]) -> bool {
        let mut o = Orientation::new(self);
        set.iter().all(|&e| o.insert(e))
    }

    fn describe(&self) -> String {
        format!("count(q={})", self.q)
    }

    fn basis(&self, set: &[usize]) -> Vec<usize> {
        let mut o = Orientation::new(self);
        set.iter().copied().filter(|&e| o.insert(e)).collect()
    }

    /// An element is a non-coloop exactly when it is outside the greedy basis or can be
    /// displaced by a rejected element along an alternating path.
    fn non_coloops(&self, set: &[usize]) -> Vec<bool> {
        let mut o = Orientation::new(self);
        let rejected: Vec<usize> = set.iter().copied().filter(|&e| !o.insert(e)).collect();
        let mut reached: HashSet<usize> = rejected.iter().copied().collect();
        let mut seen_vertex = vec![false; o.at.len()];
        let mut queue: VecDeque<usize> = rejected.into_iter().collect();
        while let Some(f) = queue.pop_front() {
            for &v in &self.ends[f] {
                if std::mem::replace(&mut seen_vertex[v as usize], true) {
                    continue;
                }
                for &g in &o.at[v as usize] {
                    if reached.insert(g) {
                        queue.push_back(g);
                    }
                }
            }
        }
        set.iter().map(|e| reached.contains(e)).collect()
    }

    fn instance_symmetric(&self) -> bool {
        true
    }
}
