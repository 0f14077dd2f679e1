use super::expand::{expand, Lookup, Val, WdvvInstance};
use super::pairing::pairing;
use crate::error::{Error, Result};
use crate::exact::rat::Rat;
use crate::group::{ClassKind, GroupModel};
use num_traits::{One, Zero};
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet, HashMap};

/// Index map `a^i ↦ a^{2i}` read on class representatives.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PhiPath {
    /// `D̂ₙ`, on `1..=n−3`, landing in `1..=n−2`.
    BinaryDihedral,
    /// `Dₙ` with `n` odd, a permutation of `1..=(n−3)/2`.
    DihedralOdd,
}

pub fn phi(path: PhiPath, n: u32, i: u32) -> u32 {
    match path {
        PhiPath::BinaryDihedral => {
            if 2 * i <= n - 2 {
                2 * i
            } else {
                2 * n - 4 - 2 * i
            }
        }
        PhiPath::DihedralOdd => {
            if 4 * i <= n - 3 {
                2 * i
            } else {
                n - 2 - 2 * i
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum OrbitType {
    /// Iterates reach `n − 2`.
    ReachesCentral,
    Fixed,
    /// On a cycle of length at least 2.
    Cyclic,
    /// Reaches a cycle or fixed point without lying on it.
    Tail,
}

fn domain(path: PhiPath, n: u32) -> Vec<u32> {
    match path {
        PhiPath::BinaryDihedral => (1..=n.saturating_sub(3)).collect(),
        PhiPath::DihedralOdd => (1..=(n.saturating_sub(3)) / 2).collect(),
    }
}

/// Type of every index in the domain of `φ`.
pub fn phi_orbit_structure(n: u32, path: PhiPath) -> Result<Vec<(u32, OrbitType)>> {
    match path {
        PhiPath::BinaryDihedral if n < 4 => return Err(Error::ParamTooSmall(format!("n = {n} < 4"))),
        PhiPath::DihedralOdd if n < 5 || n.is_multiple_of(2) => {
            return Err(Error::ParamTooSmall(format!("n = {n} must be odd and at least 5")))
        }
        _ => {}
    }
    Ok(domain(path, n)
        .into_iter()
        .map(|i| {
            let mut seen = vec![i];
            let mut j = i;
            loop {
                j = phi(path, n, j);
                if path == PhiPath::BinaryDihedral && j == n - 2 {
                    return (i, OrbitType::ReachesCentral);
                }
                if j == i {
                    let t = if seen.len() == 1 { OrbitType::Fixed } else { OrbitType::Cyclic };
                    return (i, t);
                }
                if seen.contains(&j) {
                    return (i, OrbitType::Tail);
                }
                seen.push(j);
            }
        })
        .collect())
}

/// The `u`-block of the `(a^i b | a^i b)` equations of `Dₙ` at one background.
#[derive(Clone, Debug)]
pub struct BandSystem {
    pub indices: Vec<u32>,
    /// All rows divided by one common factor.
    pub matrix: Vec<Vec<Rat>>,
    pub orbits: Vec<Vec<u32>>,
    pub orbit_determinants: Vec<Rat>,
}

impl BandSystem {
    /// `4δ_{il} − δ_{l,φ(i)}`.
    pub fn is_band(&self, n: u32) -> bool {
        let pos: HashMap<u32, usize> = self.indices.iter().enumerate().map(|(p, i)| (*i, p)).collect();
        self.indices.iter().enumerate().all(|(r, &i)| {
            let f = pos[&phi(PhiPath::DihedralOdd, n, i)];
            (0..self.indices.len()).all(|c| {
                let want = if c == r { 4 } else { 0 } - if c == f { 1 } else { 0 };
                self.matrix[r][c] == Rat::from_integer(want.into())
            })
        })
    }
}

struct BandLookup<'a> {
    g: &'a GroupModel,
    u: &'a HashMap<Vec<u32>, usize>,
}

impl Lookup for BandLookup<'_> {
    fn get(&self, key: &[u32]) -> Result<Val> {
        if let Some(&c) = self.u.get(key) {
            return Ok(Val::Unknown(c));
        }
        if key.iter().sum::<u32>() == 3 {
            let mut c = vec![0];
            c.extend_from_slice(key);
            return Ok(Val::Known(self.g.frob(&c)));
        }
        Ok(Val::Known(Rat::zero()))
    }
}

pub(crate) fn determinant(mut m: Vec<Vec<Rat>>) -> Rat {
    let n = m.len();
    let mut det = Rat::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !m[r][col].is_zero()) else { return Rat::zero() };
        if p != col {
            m.swap(p, col);
            det = -det;
        }
        let pv = m[col][col].clone();
        det *= &pv;
        for r in col + 1..n {
            let f = &m[r][col] / &pv;
            if f.is_zero() {
                continue;
            }
            for c in col..n {
                let d = &f * &m[col][c];
                m[r][c] -= d;
            }
        }
    }
    det
}

/// Builds the system for `u_i = ⟨K a^i b b⟩`, `1 ≤ i ≤ (n−3)/2`, from the
/// `(a^i b | a^i b)` instances at background `K` (counts over non-unit
/// classes). Keys other than the `u_i` are moved to the right-hand side.
pub fn dn_band_matrix(n: u32, background: &[u32]) -> Result<BandSystem> {
    let orbits_t = phi_orbit_structure(n, PhiPath::DihedralOdd)?;
    let g = GroupModel::dihedral(n)?;
    if background.len() + 1 != g.num_classes() {
        return Err(Error::InternalMismatch("background length does not match the class count".into()));
    }
    if background.iter().all(|&c| c == 0) {
        return Err(Error::ParamTooSmall("the background must be nonempty".into()));
    }
    let pr = pairing(&g);
    let b = g.find_class(ClassKind::B).expect("b class");
    let indices: Vec<u32> = orbits_t.iter().map(|(i, _)| *i).collect();
    let a_of = |i: u32| g.find_class(ClassKind::A(i)).expect("a class");
    let mut u = HashMap::new();
    for (p, &i) in indices.iter().enumerate() {
        let mut key = background.to_vec();
        key[a_of(i) - 1] += 1;
        key[b - 1] += 2;
        u.insert(key, p);
    }
    let lk = BandLookup { g: &g, u: &u };
    let mut raw = Vec::new();
    for &i in &indices {
        let a = a_of(i);
        let inst = WdvvInstance { quad: [a, b, a, b], background: background.to_vec() };
        let form = expand(&g, &pr, &lk, &inst)?;
        let mut row = vec![Rat::zero(); indices.len()];
        for (_, (_, vars)) in form.terms {
            for (c, v) in vars {
                row[c] += v;
            }
        }
        raw.push(row);
    }
    // One common scale: the diagonal of a row with φ(i) = i carries 4 − 1.
    let fixed = phi(PhiPath::DihedralOdd, n, indices[0]) == indices[0];
    let scale = &raw[0][0] / Rat::from_integer(if fixed { 3 } else { 4 }.into());
    if scale.is_zero() {
        return Err(Error::SingularSystem(format!("no diagonal term for u_{}", indices[0])));
    }
    let matrix: Vec<Vec<Rat>> = raw.into_iter().map(|r| r.into_iter().map(|v| v / &scale).collect()).collect();

    let mut orbits = Vec::new();
    let mut done = BTreeSet::new();
    for &i in &indices {
        if done.contains(&i) {
            continue;
        }
        let mut orb = vec![i];
        done.insert(i);
        let mut j = phi(PhiPath::DihedralOdd, n, i);
        while j != i {
            orb.push(j);
            done.insert(j);
            j = phi(PhiPath::DihedralOdd, n, j);
        }
        orbits.push(orb);
    }
    let pos: BTreeMap<u32, usize> = indices.iter().enumerate().map(|(p, i)| (*i, p)).collect();
    let orbit_determinants = orbits
        .iter()
        .map(|orb| {
            let sub = orb
                .iter()
                .map(|r| orb.iter().map(|c| matrix[pos[r]][pos[c]].clone()).collect())
                .collect();
            determinant(sub)
        })
        .collect();
    Ok(BandSystem { indices, matrix, orbits, orbit_determinants })
}
