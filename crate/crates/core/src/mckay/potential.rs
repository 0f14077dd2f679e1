use super::roots::{positive_roots, type_a_roots, Root, RootSystem};
use crate::error::{Error, Result};
use crate::exact::{h_derivative, root_of_unity, Cyc};
use crate::group::{ClassKind, Family, GroupModel};
use crate::Rat;
use std::collections::{BTreeMap, HashMap};
use std::sync::Mutex;

/// `P_β = 2π c_β/|G| + Σ_γ coef_γ x_γ`.
#[derive(Clone, Debug)]
pub struct PBetaForm {
    pub c: u32,
    pub order: u32,
    /// One coefficient per class, unit class included (always zero).
    pub coeffs: Vec<Cyc>,
}

impl PBetaForm {
    /// Constant term divided by `2π`.
    pub fn constant(&self) -> Rat {
        Rat::new(self.c.into(), self.order.into())
    }
}

/// `√(2 − χ_{ρ₁}(γ))` as a real cyclotomic number.
pub fn sqrt_two_minus_rho1(g: &GroupModel, class: usize) -> Cyc {
    match g.classes[class].kind {
        ClassKind::Unit => Cyc::zero(),
        ClassKind::A(l) => {
            // 2 sin(πl/N) = −i(ζ_{2N}^l − ζ_{2N}^{−l})
            let z = 2 * g.na;
            let i = root_of_unity(4, 1);
            -&(&i * &(&root_of_unity(z, l as i64) - &root_of_unity(z, -(l as i64))))
        }
        ClassKind::B | ClassKind::AB => &root_of_unity(8, 1) + &root_of_unity(8, -1),
    }
}

/// Linear form of a positive root for the group `g` with node labels from `rs`.
pub fn p_beta(root: &Root, rs: &RootSystem, g: &GroupModel) -> PBetaForm {
    let t = g.chars();
    let node_rows: Vec<&Vec<Cyc>> = rs
        .node_irreps
        .iter()
        .map(|name| &t.values[t.index_of(name).expect("node irrep in table")])
        .collect();
    let c: u32 = root
        .coeffs
        .iter()
        .zip(&rs.node_irreps)
        .map(|(b, name)| b * t.irreps[t.index_of(name).unwrap()].dim)
        .sum();
    let order = g.order() as u32;
    let coeffs = (0..g.num_classes())
        .map(|cl| {
            let mut s = Cyc::zero();
            for (k, &b) in root.coeffs.iter().enumerate() {
                if b != 0 {
                    s = &s + &node_rows[k][cl].conj().scale(&Rat::from_integer(b.into()));
                }
            }
            let w = Rat::new(g.classes[cl].size.into(), order.into());
            (&sqrt_two_minus_rho1(g, cl) * &s).scale(&w)
        })
        .collect();
    PBetaForm { c, order, coeffs }
}

/// `F₀ = 2λ Σ_{β>0} h(π + P_β)` for `D̂ₙ` (root system `D_n`) or `Z_N`
/// (root system `A_{N−1}`). Correlators are λ-stripped derivatives of order ≥ 3.
#[derive(Debug)]
pub struct Potential {
    pub group: GroupModel,
    pub roots: RootSystem,
    pub forms: Vec<PBetaForm>,
    hcache: Mutex<HashMap<(usize, u32), Cyc>>,
}

impl Potential {
    pub fn binary_dihedral(n: u32) -> Result<Potential> {
        let group = GroupModel::binary_dihedral(n)?;
        let roots = positive_roots(n)?;
        Ok(Self::assemble(group, roots))
    }

    pub fn type_a(order: u32) -> Result<Potential> {
        if order < 2 {
            return Err(Error::ParamTooSmall(format!("type A potential needs order >= 2, got {order}")));
        }
        let group = GroupModel::cyclic(order)?;
        let roots = type_a_roots(order);
        Ok(Self::assemble(group, roots))
    }

    fn assemble(group: GroupModel, roots: RootSystem) -> Potential {
        let forms = roots.roots.iter().map(|r| p_beta(r, &roots, &group)).collect();
        Potential { group, roots, forms, hcache: Mutex::new(HashMap::new()) }
    }

    fn h(&self, order: usize, c: u32) -> Result<Cyc> {
        if let Some(v) = self.hcache.lock().unwrap().get(&(order, c)) {
            return Ok(v.clone());
        }
        let v = h_derivative(order, &Rat::new(c.into(), (self.group.order() as u32).into()))?;
        self.hcache.lock().unwrap().insert((order, c), v.clone());
        Ok(v)
    }

    /// Correlator for a class-count vector over the non-unit classes.
    pub fn correlator(&self, key: &[u32]) -> Result<Rat> {
        let nc = self.group.num_classes();
        assert_eq!(key.len(), nc - 1, "key length must equal the number of non-unit classes");
        let m: u32 = key.iter().sum();
        if m < 3 {
            return Err(Error::ParamTooSmall(format!("correlators need length >= 3, got {m}")));
        }
        let mut by_c: BTreeMap<u32, Cyc> = BTreeMap::new();
        for f in &self.forms {
            let mut p = Cyc::one();
            for (j, &k) in key.iter().enumerate() {
                if k > 0 {
                    p = &p * &f.coeffs[j + 1].pow(k);
                }
                if p.is_zero() {
                    break;
                }
            }
            if !p.is_zero() {
                let e = by_c.entry(f.c).or_insert_with(Cyc::zero);
                *e = &*e + &p;
            }
        }
        let mut total = Cyc::zero();
        for (c, p) in by_c {
            total = &total + &(&self.h(m as usize, c)? * &p);
        }
        let total = total.scale(&Rat::from_integer(2.into()));
        total
            .to_rat()
            .ok_or_else(|| Error::IrrationalResult(format!("{} key {key:?}", self.group.label())))
    }

    /// Correlator for a list of non-unit class indices.
    pub fn correlator_classes(&self, classes: &[usize]) -> Result<Rat> {
        let mut key = vec![0u32; self.group.num_classes() - 1];
        for &c in classes {
            assert!(c != 0, "unit insertions are not part of the potential");
            key[c - 1] += 1;
        }
        self.correlator(&key)
    }

    pub fn family(&self) -> Family {
        self.group.family
    }
}
