use super::model::{ClassKind, Family, GroupModel};
use crate::exact::rat::lcm_u64;
use crate::exact::{root_of_unity, Cyc};
use crate::Rat;
use num_traits::{ToPrimitive, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Irrep {
    pub name: String,
    pub dim: u32,
}

/// Irreducible characters as exact cyclotomic values, `values[irrep][class]`.
#[derive(Clone, Debug)]
pub struct CharacterTable {
    pub modulus: u32,
    pub irreps: Vec<Irrep>,
    pub values: Vec<Vec<Cyc>>,
}

impl CharacterTable {
    pub fn value(&self, irrep: usize, class: usize) -> &Cyc {
        &self.values[irrep][class]
    }

    pub fn len(&self) -> usize {
        self.irreps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.irreps.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.irreps.iter().position(|r| r.name == name)
    }

    /// `(1/|G|) Σ_C |C| f(C) conj(g(C))`.
    pub fn inner(g: &GroupModel, f: &[Cyc], h: &[Cyc]) -> Cyc {
        let mut s = Cyc::zero();
        for (c, info) in g.classes.iter().enumerate() {
            s = &s + &(&f[c] * &h[c].conj()).scale(&Rat::from_integer(info.size.into()));
        }
        s.scale(&Rat::new(1.into(), g.order().into()))
    }
}

/// Returns the (cached) character table of `g`.
pub fn character_table(g: &GroupModel) -> &CharacterTable {
    g.table.get_or_init(|| build(g))
}

fn linear_row(g: &GroupModel, modulus: u32, alpha: &Cyc, beta: &Cyc) -> Vec<Cyc> {
    let _ = modulus;
    g.classes
        .iter()
        .map(|c| match c.kind {
            ClassKind::Unit => Cyc::one(),
            ClassKind::A(k) => alpha.pow(k),
            ClassKind::B => beta.clone(),
            ClassKind::AB => alpha * beta,
        })
        .collect()
}

fn rho_row(g: &GroupModel, k: u32) -> Vec<Cyc> {
    let na = g.na;
    g.classes
        .iter()
        .map(|c| match c.kind {
            ClassKind::Unit => Cyc::from_int(2),
            ClassKind::A(l) => {
                let e = (k as i64) * (l as i64);
                &root_of_unity(na, e) + &root_of_unity(na, -e)
            }
            ClassKind::B | ClassKind::AB => Cyc::zero(),
        })
        .collect()
}

fn build(g: &GroupModel) -> CharacterTable {
    let modulus = lcm_u64(8, g.na as u64) as u32;
    let one = Cyc::one();
    let m1 = Cyc::from_int(-1);
    let i = root_of_unity(4, 1);
    let mut irreps = Vec::new();
    let mut values = Vec::new();
    let mut push = |name: String, dim: u32, row: Vec<Cyc>| {
        irreps.push(Irrep { name, dim });
        values.push(row);
    };
    match g.family {
        Family::BinaryDihedral => {
            let n = g.n;
            let (b3, b4) = if n.is_multiple_of(2) { (m1.clone(), one.clone()) } else { (i.clone(), -&i) };
            push("psi1".into(), 1, linear_row(g, modulus, &one, &one));
            push("psi2".into(), 1, linear_row(g, modulus, &one, &m1));
            push("psi3".into(), 1, linear_row(g, modulus, &m1, &b3));
            push("psi4".into(), 1, linear_row(g, modulus, &m1, &b4));
            for k in 1..=n - 3 {
                push(format!("rho{k}"), 2, rho_row(g, k));
            }
        }
        Family::Dihedral => {
            let na = g.na;
            push("psi1".into(), 1, linear_row(g, modulus, &one, &one));
            push("psi2".into(), 1, linear_row(g, modulus, &one, &m1));
            if na.is_multiple_of(2) {
                push("psi3".into(), 1, linear_row(g, modulus, &m1, &m1));
                push("psi4".into(), 1, linear_row(g, modulus, &m1, &one));
            }
            for k in 1..=(na - 1) / 2 {
                push(format!("rho{k}"), 2, rho_row(g, k));
            }
        }
        Family::Cyclic => {
            let na = g.na;
            for k in 0..na {
                let row = g
                    .classes
                    .iter()
                    .map(|c| match c.kind {
                        ClassKind::A(l) => root_of_unity(na, k as i64 * l as i64),
                        _ => Cyc::one(),
                    })
                    .collect();
                push(format!("sigma{k}"), 1, row);
            }
        }
    }
    CharacterTable { modulus, irreps, values }
}

impl GroupModel {
    pub fn chars(&self) -> &CharacterTable {
        character_table(self)
    }

    /// Character of the natural two-dimensional representation `ρ₁`
    /// (for cyclic groups, `σ₁ ⊕ σ₋₁`).
    pub fn rho1_char(&self) -> Vec<Cyc> {
        match self.family {
            Family::Cyclic => rho_row(self, 1),
            _ => {
                let t = self.chars();
                t.values[t.index_of("rho1").expect("rho1 present")].clone()
            }
        }
    }
}

/// Multiplicities of irreducibles in `ρ₁ ⊗ irrep`, as `(irrep index, multiplicity)`.
pub fn tensor_decompose_rho1(g: &GroupModel, irrep: usize) -> Vec<(usize, u32)> {
    let t = g.chars();
    let r1 = g.rho1_char();
    let prod: Vec<Cyc> = r1.iter().zip(&t.values[irrep]).map(|(a, b)| a * b).collect();
    let mut out = Vec::new();
    for (j, row) in t.values.iter().enumerate() {
        let m = CharacterTable::inner(g, &prod, row)
            .to_rat()
            .expect("multiplicity is rational");
        if !m.is_zero() {
            assert!(m.is_integer(), "non-integral multiplicity");
            out.push((j, m.to_integer().to_u32().expect("non-negative multiplicity")));
        }
    }
    out
}

/// McKay adjacency matrix `A[i][j]` = multiplicity of `χ_j` in `ρ₁ ⊗ χ_i`.
pub fn mckay_adjacency(g: &GroupModel) -> Vec<Vec<u32>> {
    let k = g.chars().len();
    (0..k)
        .map(|i| {
            let mut row = vec![0; k];
            for (j, m) in tensor_decompose_rho1(g, i) {
                row[j] = m;
            }
            row
        })
        .collect()
}
