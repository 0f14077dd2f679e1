use super::model::{Elem, Family, GroupModel};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Embedding {
    /// `Z_{2n−4} → D̂ₙ`, `a ↦ a`.
    CyclicInBinary,
    /// `D̂ₙ → D̂_{2n−2}`, `a ↦ a², b ↦ b`.
    BinaryDoubling,
}

/// Induced map on conjugacy classes of a subgroup inclusion.
#[derive(Clone, Debug)]
pub struct ClassMap {
    pub source: String,
    pub target: String,
    /// `map[c]` = target class of source class `c`.
    pub map: Vec<usize>,
    embedding: Embedding,
}

impl ClassMap {
    pub fn embed(&self, e: Elem) -> Elem {
        match self.embedding {
            Embedding::CyclicInBinary => e,
            Embedding::BinaryDoubling => Elem { i: 2 * e.i, b: e.b },
        }
    }

    pub fn apply(&self, class: usize) -> usize {
        self.map[class]
    }
}

/// Class map of `H ⊂ G` for the two supported inclusions.
pub fn restriction_map(h: &GroupModel, g: &GroupModel) -> Result<ClassMap> {
    let embedding = match (h.family, g.family) {
        (Family::Cyclic, Family::BinaryDihedral) if h.na == g.na => Embedding::CyclicInBinary,
        (Family::BinaryDihedral, Family::BinaryDihedral) if g.n == 2 * h.n - 2 => Embedding::BinaryDoubling,
        _ => {
            return Err(Error::UnsupportedPair(format!("{} in {}", h.label(), g.label())));
        }
    };
    let mut cm = ClassMap { source: h.label(), target: g.label(), map: Vec::new(), embedding };
    for info in &h.classes {
        let t = g.class_index(cm.embed(info.rep));
        for &e in &info.elements {
            if g.class_index(cm.embed(e)) != t {
                return Err(Error::InternalMismatch(format!("class {} does not map to one class", info.name)));
            }
        }
        cm.map.push(t);
    }
    Ok(cm)
}
