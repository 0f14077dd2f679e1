//! Labeled trees with half edges.

use crate::exact::rat::rq;
use crate::Rat;
use num_traits::One;
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Slot {
    HalfEdge,
    Edge,
}

/// A tree whose edges and half edges carry the labels `0..r`. Vertices are
/// unlabeled; each is stored as the sorted list of labels incident to it, and
/// the vertex list is sorted, so equal values are isomorphic trees.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Lthe {
    pub slots: Vec<Slot>,
    pub vertices: Vec<Vec<usize>>,
}

impl Lthe {
    pub fn degree(&self) -> usize {
        self.slots.len()
    }

    fn canonical(mut self) -> Lthe {
        for v in &mut self.vertices {
            v.sort_unstable();
        }
        self.vertices.sort();
        self
    }

    /// `(label, u, v)` with `u < v` the two endpoints of each edge.
    pub fn edges(&self) -> Vec<(usize, usize, usize)> {
        let mut ends: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (i, v) in self.vertices.iter().enumerate() {
            for &l in v {
                if self.slots[l] == Slot::Edge {
                    ends.entry(l).or_default().push(i);
                }
            }
        }
        ends.into_iter().map(|(l, e)| (l, e[0], e[1])).collect()
    }

    /// Connected, acyclic, and every label used with the right valence.
    pub fn is_valid(&self) -> bool {
        let mut seen = vec![0usize; self.slots.len()];
        for v in &self.vertices {
            for &l in v {
                if l >= seen.len() {
                    return false;
                }
                seen[l] += 1;
            }
        }
        let ok = self.slots.iter().zip(&seen).all(|(s, &k)| match s {
            Slot::HalfEdge => k == 1,
            Slot::Edge => k == 2,
        });
        let edges = self.edges();
        if !ok || edges.len() + 1 != self.vertices.len() {
            return false;
        }
        let mut parent: Vec<usize> = (0..self.vertices.len()).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            if p[x] != x {
                let r = find(p, p[x]);
                p[x] = r;
            }
            p[x]
        }
        for (_, u, v) in edges {
            let (a, b) = (find(&mut parent, u), find(&mut parent, v));
            if a == b {
                return false;
            }
            parent[a] = b;
        }
        true
    }

    /// `1/|Aut|`: only the single edge between two bare vertices has a
    /// nontrivial automorphism.
    pub fn symmetry(&self) -> Rat {
        if self.slots == [Slot::Edge] {
            rq(1, 2)
        } else {
            Rat::one()
        }
    }
}

/// Trees on the label set `labels` (ascending), built by attaching the
/// smallest label either as a half edge on a tree of the others or as an
/// edge joining trees on a split of the others.
fn grow(labels: &[usize], r: usize, memo: &mut BTreeMap<Vec<usize>, Vec<Lthe>>) -> Vec<Lthe> {
    if let Some(v) = memo.get(labels) {
        return v.clone();
    }
    let mut out: BTreeSet<Lthe> = BTreeSet::new();
    if labels.is_empty() {
        out.insert(Lthe { slots: vec![Slot::HalfEdge; r], vertices: vec![vec![]] });
    } else {
        let i = labels[0];
        let rest = &labels[1..];
        for t in grow(rest, r, memo) {
            for v in 0..t.vertices.len() {
                let mut s = t.clone();
                s.slots[i] = Slot::HalfEdge;
                s.vertices[v].push(i);
                out.insert(s.canonical());
            }
        }
        for mask in 0u32..(1 << rest.len()) {
            let a: Vec<usize> = (0..rest.len()).filter(|&j| mask >> j & 1 == 1).map(|j| rest[j]).collect();
            let b: Vec<usize> = (0..rest.len()).filter(|&j| mask >> j & 1 == 0).map(|j| rest[j]).collect();
            let (ta, tb) = (grow(&a, r, memo), grow(&b, r, memo));
            for x in &ta {
                for y in &tb {
                    for u in 0..x.vertices.len() {
                        for v in 0..y.vertices.len() {
                            let mut slots = vec![Slot::HalfEdge; r];
                            for &l in a.iter().chain(&b) {
                                slots[l] = if a.contains(&l) { x.slots[l] } else { y.slots[l] };
                            }
                            slots[i] = Slot::Edge;
                            let mut vertices = x.vertices.clone();
                            vertices[u].push(i);
                            let mut yv = y.vertices.clone();
                            yv[v].push(i);
                            vertices.extend(yv);
                            out.insert(Lthe { slots, vertices }.canonical());
                        }
                    }
                }
            }
        }
    }
    let v: Vec<Lthe> = out.into_iter().collect();
    memo.insert(labels.to_vec(), v.clone());
    v
}

/// Every labeled tree with half edges of degree `r`, up to isomorphism.
pub fn lthe_enumerate(r: usize) -> Vec<Lthe> {
    assert!(r >= 1, "degree must be positive");
    let labels: Vec<usize> = (0..r).collect();
    grow(&labels, r, &mut BTreeMap::new())
}
