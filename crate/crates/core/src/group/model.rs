use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    /// `a^{n−2} = b², b⁴ = 1, ba = a⁻¹b`, order `4n−8`.
    BinaryDihedral,
    /// `a^{n−2} = b² = 1, ba = a⁻¹b`, order `2n−4`.
    Dihedral,
    /// `a^N = 1`.
    Cyclic,
}

impl Family {
    pub fn tag(self) -> &'static str {
        match self {
            Family::BinaryDihedral => "bdn",
            Family::Dihedral => "dn",
            Family::Cyclic => "cyclic",
        }
    }
}

/// `a^i b^{[b]}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Elem {
    pub i: u32,
    pub b: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ClassKind {
    Unit,
    /// Class of `a^k`.
    A(u32),
    /// `a^{even} b`, or every `a^i b` when those form one class.
    B,
    /// `a^{odd} b`.
    AB,
}

#[derive(Clone, Debug)]
pub struct ClassInfo {
    pub name: String,
    pub kind: ClassKind,
    pub rep: Elem,
    pub size: usize,
    pub centralizer: usize,
    pub elements: Vec<Elem>,
}

/// A finite group from one of the three families, fully enumerated.
#[derive(Debug)]
pub struct GroupModel {
    pub family: Family,
    /// `n` for the dihedral families, the order for cyclic groups.
    pub n: u32,
    /// Order of `a`.
    pub na: u32,
    /// `b² = a^{bsq}`.
    bsq: u32,
    pub classes: Vec<ClassInfo>,
    class_of: Vec<usize>,
    inverse_class: Vec<usize>,
    /// `consts[i][j][k] = #{(x, y) ∈ C_i × C_j : xy = z}` for a fixed `z ∈ C_k`.
    consts: Vec<Vec<Vec<u64>>>,
    frob_cache: Mutex<HashMap<Vec<u32>, num_rational::BigRational>>,
    pub(crate) table: OnceLock<super::CharacterTable>,
}

impl GroupModel {
    pub fn binary_dihedral(n: u32) -> Result<GroupModel> {
        if n < 4 {
            return Err(Error::ParamTooSmall(format!("binary dihedral group needs n >= 4, got {n}")));
        }
        let mut kinds = vec![ClassKind::Unit];
        kinds.extend((1..=n - 2).map(ClassKind::A));
        kinds.extend([ClassKind::B, ClassKind::AB]);
        Self::build(Family::BinaryDihedral, n, 2 * n - 4, n - 2, kinds)
    }

    pub fn dihedral(n: u32) -> Result<GroupModel> {
        if n < 5 {
            return Err(Error::ParamTooSmall(format!("dihedral family needs n >= 5, got {n}")));
        }
        let na = n - 2;
        let mut kinds = vec![ClassKind::Unit];
        kinds.extend((1..=na / 2).map(ClassKind::A));
        kinds.push(ClassKind::B);
        if na.is_multiple_of(2) {
            kinds.push(ClassKind::AB);
        }
        Self::build(Family::Dihedral, n, na, 0, kinds)
    }

    pub fn cyclic(order: u32) -> Result<GroupModel> {
        if order < 1 {
            return Err(Error::ParamTooSmall("cyclic group needs order >= 1".into()));
        }
        let mut kinds = vec![ClassKind::Unit];
        kinds.extend((1..order).map(ClassKind::A));
        Self::build(Family::Cyclic, order, order, 0, kinds)
    }

    pub fn new(family: Family, n: u32) -> Result<GroupModel> {
        match family {
            Family::BinaryDihedral => Self::binary_dihedral(n),
            Family::Dihedral => Self::dihedral(n),
            Family::Cyclic => Self::cyclic(n),
        }
    }

    fn build(family: Family, n: u32, na: u32, bsq: u32, kinds: Vec<ClassKind>) -> Result<GroupModel> {
        let mut g = GroupModel {
            family,
            n,
            na,
            bsq,
            classes: Vec::new(),
            class_of: Vec::new(),
            inverse_class: Vec::new(),
            consts: Vec::new(),
            frob_cache: Mutex::new(HashMap::new()),
            table: OnceLock::new(),
        };
        let order = g.order();
        let mut class_of = vec![usize::MAX; order];
        for (ci, kind) in kinds.iter().enumerate() {
            let rep = match kind {
                ClassKind::Unit => Elem { i: 0, b: false },
                ClassKind::A(k) => Elem { i: *k, b: false },
                ClassKind::B => Elem { i: 0, b: true },
                ClassKind::AB => Elem { i: 1, b: true },
            };
            let mut elements: Vec<Elem> = g.elements().map(|x| g.mul(g.mul(x, rep), g.inv(x))).collect();
            elements.sort();
            elements.dedup();
            for e in &elements {
                let id = g.id(*e);
                assert_eq!(class_of[id], usize::MAX, "class orbits overlap");
                class_of[id] = ci;
            }
            let name = match kind {
                ClassKind::Unit => "1".to_string(),
                ClassKind::A(k) => format!("a^{k}"),
                ClassKind::B => "b".into(),
                ClassKind::AB => "ab".into(),
            };
            g.classes.push(ClassInfo {
                name,
                kind: *kind,
                rep,
                size: elements.len(),
                centralizer: order / elements.len(),
                elements,
            });
        }
        assert!(class_of.iter().all(|&c| c != usize::MAX), "classes do not cover the group");
        g.class_of = class_of;
        g.inverse_class = g.classes.iter().map(|c| g.class_index(g.inv(c.rep))).collect();
        let nc = g.classes.len();
        let mut consts = vec![vec![vec![0u64; nc]; nc]; nc];
        for (k, ck) in g.classes.iter().enumerate() {
            let z = ck.rep;
            for x in g.elements() {
                let y = g.mul(g.inv(x), z);
                consts[g.class_index(x)][g.class_index(y)][k] += 1;
            }
        }
        g.consts = consts;
        Ok(g)
    }

    pub fn order(&self) -> usize {
        match self.family {
            Family::Cyclic => self.na as usize,
            _ => 2 * self.na as usize,
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> + '_ {
        (0..self.order()).map(move |id| self.elem(id))
    }

    pub fn id(&self, e: Elem) -> usize {
        e.i as usize + if e.b { self.na as usize } else { 0 }
    }

    pub fn elem(&self, id: usize) -> Elem {
        let na = self.na as usize;
        Elem { i: (id % na) as u32, b: id >= na }
    }

    pub fn mul(&self, x: Elem, y: Elem) -> Elem {
        let na = self.na as i64;
        let (xi, yi) = (x.i as i64, y.i as i64);
        let (i, b) = match (x.b, y.b) {
            (false, _) => (xi + yi, y.b),
            (true, false) => (xi - yi, true),
            (true, true) => (xi - yi + self.bsq as i64, false),
        };
        Elem { i: i.rem_euclid(na) as u32, b }
    }

    pub fn inv(&self, x: Elem) -> Elem {
        let na = self.na as i64;
        if x.b {
            Elem { i: ((x.i + self.bsq) as i64).rem_euclid(na) as u32, b: true }
        } else {
            Elem { i: (-(x.i as i64)).rem_euclid(na) as u32, b: false }
        }
    }

    pub fn identity(&self) -> Elem {
        Elem { i: 0, b: false }
    }

    pub fn class_index(&self, x: Elem) -> usize {
        self.class_of[self.id(x)]
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn inverse_class(&self, c: usize) -> usize {
        self.inverse_class[c]
    }

    pub fn unit_class(&self) -> usize {
        0
    }

    pub fn find_class(&self, kind: ClassKind) -> Option<usize> {
        self.classes.iter().position(|c| c.kind == kind)
    }

    pub fn class_by_name(&self, name: &str) -> Option<usize> {
        self.classes.iter().position(|c| c.name == name)
    }

    /// Indices of the non-unit classes, in canonical order.
    pub fn nonunit_classes(&self) -> Vec<usize> {
        (1..self.classes.len()).collect()
    }

    pub(crate) fn structure_constant(&self, i: usize, j: usize, k: usize) -> u64 {
        self.consts[i][j][k]
    }

    /// Frobenius count `N/|G|` for a class-count vector over all classes,
    /// memoized.
    pub fn frob(&self, counts: &[u32]) -> num_rational::BigRational {
        if let Some(v) = self.frob_cache.lock().unwrap().get(counts) {
            return v.clone();
        }
        let v = super::frobenius::convolution_counts(self, counts);
        self.frob_cache.lock().unwrap().insert(counts.to_vec(), v.clone());
        v
    }

    pub fn frob_nonzero(&self, counts: &[u32]) -> bool {
        !self.frob(counts).is_zero()
    }

    pub fn label(&self) -> String {
        format!("{}{}", self.family.tag(), self.n)
    }

    pub(crate) fn big_order(&self) -> BigInt {
        BigInt::from(self.order())
    }
}
