//! Genus-0 descendant potential of `BG` and its point-potential decomposition.

use crate::exact::rat::{factorial, fmt_rat};
use crate::exact::{Cyc, Rat, TruncPoly};
use crate::group::GroupModel;
use crate::{Error, Result};
use num_traits::{One, Zero};
use std::sync::Arc;

/// `∫_{M̄_{0,m}(BG; γ₁..γ_m)} Π ψ_i^{k_i}`: the Frobenius count times the
/// point integral `(m−3)!/Πk_i!`, zero off the dimension `Σk_i = m−3`.
pub fn untwisted_correlator(g: &GroupModel, classes: &[usize], psi: &[u32]) -> Rat {
    assert_eq!(classes.len(), psi.len(), "one ψ power per insertion");
    let m = classes.len();
    if m < 3 || psi.iter().map(|&k| k as usize).sum::<usize>() != m - 3 {
        return Rat::zero();
    }
    let mut counts = vec![0u32; g.num_classes()];
    for &c in classes {
        counts[c] += 1;
    }
    let mut den = num_bigint::BigInt::one();
    for &k in psi {
        den *= factorial(k as u64);
    }
    g.frob(&counts) * Rat::new(factorial(m as u64 - 3), den)
}

/// Truncated genus-0 potential in the variables `t_l^{[γ]}`, `l ≤ max_level`.
/// Variable `class·(max_level+1) + l` is `t_l^{[γ]}`.
#[derive(Clone, Debug, PartialEq)]
pub struct UntwistedPotential {
    pub label: String,
    pub class_names: Vec<String>,
    pub max_level: u32,
    pub max_deg: u32,
    pub poly: TruncPoly<Rat>,
}

impl UntwistedPotential {
    pub fn var(&self, class: usize, level: u32) -> usize {
        class * (self.max_level as usize + 1) + level as usize
    }

    /// Coefficient of `Π t_{l}^{[γ]}` for the given `(class, level)` list;
    /// repeated entries are exponents.
    pub fn coeff(&self, insertions: &[(usize, u32)]) -> Rat {
        let mut e = vec![0u8; self.poly.nvars()];
        for &(c, l) in insertions {
            e[self.var(c, l)] += 1;
        }
        self.poly.coeff(&e)
    }

    /// First monomial on which two potentials differ.
    pub fn compare(&self, other: &UntwistedPotential) -> Result<()> {
        if self.poly.nvars() != other.poly.nvars() {
            return Err(Error::Mismatch("potentials use different variable sets".into()));
        }
        let diff = self.poly.sub(&other.poly);
        let first = diff.terms().next().map(|(e, _)| e.clone());
        match first {
            None => Ok(()),
            Some(e) => {
                let name: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &k)| k > 0)
                    .map(|(i, &k)| format!("{}^{k}", self.poly.vars()[i]))
                    .collect();
                Err(Error::Mismatch(format!(
                    "{}: coefficient of {} is {} vs {}",
                    self.label,
                    name.join("·"),
                    fmt_rat(&self.poly.coeff(&e)),
                    fmt_rat(&other.poly.coeff(&e))
                )))
            }
        }
    }
}

fn var_names(g: &GroupModel, max_level: u32) -> Arc<Vec<String>> {
    let mut v = Vec::new();
    for c in &g.classes {
        for l in 0..=max_level {
            v.push(format!("t{l}[{}]", c.name));
        }
    }
    Arc::new(v)
}

/// Exponent vectors over `nv` variables with levels `level(i)`, total degree
/// `3..=max_deg` and `Σ levels = degree − 3`.
fn dimension_monomials(nv: usize, level: &dyn Fn(usize) -> u32, max_deg: u32) -> Vec<Vec<u8>> {
    fn rec(
        i: usize,
        nv: usize,
        level: &dyn Fn(usize) -> u32,
        e: &mut Vec<u8>,
        deg: u32,
        lsum: u32,
        max_deg: u32,
        out: &mut Vec<Vec<u8>>,
    ) {
        if i == nv {
            if deg >= 3 && lsum + 3 == deg {
                out.push(e.clone());
            }
            return;
        }
        let l = level(i);
        let mut k = 0;
        loop {
            let d = deg + k;
            let s = lsum + k * l;
            if d > max_deg || s + 3 > max_deg {
                break;
            }
            e[i] = k as u8;
            rec(i + 1, nv, level, e, d, s, max_deg, out);
            k += 1;
        }
        e[i] = 0;
    }
    let mut out = Vec::new();
    rec(0, nv, level, &mut vec![0; nv], 0, 0, max_deg, &mut out);
    out
}

/// Genus-0 potential of `BG` from [`untwisted_correlator`].
pub fn untwisted_potential(g: &GroupModel, max_level: u32, max_deg: u32) -> UntwistedPotential {
    let vars = var_names(g, max_level);
    let w = max_level as usize + 1;
    let mut poly = TruncPoly::zero(vars.clone(), max_deg);
    for e in dimension_monomials(vars.len(), &|i| (i % w) as u32, max_deg) {
        let mut classes = Vec::new();
        let mut psi = Vec::new();
        let mut sym = num_bigint::BigInt::one();
        for (i, &k) in e.iter().enumerate() {
            for _ in 0..k {
                classes.push(i / w);
                psi.push((i % w) as u32);
            }
            sym *= factorial(k as u64);
        }
        let c = untwisted_correlator(g, &classes, &psi) / Rat::from_integer(sym);
        poly.add_term(e, c);
    }
    UntwistedPotential {
        label: g.label(),
        class_names: g.classes.iter().map(|c| c.name.clone()).collect(),
        max_level,
        max_deg,
        poly,
    }
}

/// Genus-0 point potential `Σ (m−3)!/Πk_i! Π x_{k_i} / m!` in `x_0..x_L`.
fn point_potential(max_level: u32, max_deg: u32) -> TruncPoly<Cyc> {
    let vars = Arc::new((0..=max_level).map(|l| format!("x{l}")).collect::<Vec<_>>());
    let mut p = TruncPoly::zero(vars.clone(), max_deg);
    for e in dimension_monomials(vars.len(), &|i| i as u32, max_deg) {
        let m: u32 = e.iter().map(|&k| k as u32).sum();
        let mut den = num_bigint::BigInt::one();
        for (l, &k) in e.iter().enumerate() {
            den *= factorial(k as u64) * num_traits::pow(factorial(l as u64), k as usize);
        }
        p.add_term(e, Cyc::from_rat(&Rat::new(factorial(m as u64 - 3), den)));
    }
    p
}

/// The potential of `BD̂ₙ` as a sum of point potentials, one per irreducible
/// `χ`, each evaluated at `u_l^χ = Σ_γ |γ|χ(γ)/χ(1)·t_l^{[γ]}`. The rescaling
/// of level-`l` arguments by `c^{2(1−l)/3}`, `c = |G|/χ(1)`, multiplies the
/// genus-0 part by `c^{−2}`.
pub fn eq56_potential(n: u32, max_level: u32, max_deg: u32) -> Result<UntwistedPotential> {
    let g = GroupModel::binary_dihedral(n)?;
    let vars = var_names(&g, max_level);
    let w = max_level as usize + 1;
    let pt = point_potential(max_level, max_deg);
    let table = g.chars();
    let order = Rat::from_integer(g.order().into());
    let mut total: TruncPoly<Cyc> = TruncPoly::zero(vars.clone(), max_deg);
    for (x, irrep) in table.irreps.iter().enumerate() {
        let dim = Rat::from_integer(irrep.dim.into());
        let images: Vec<TruncPoly<Cyc>> = (0..w)
            .map(|l| {
                let mut u = TruncPoly::zero(vars.clone(), max_deg);
                for (c, info) in g.classes.iter().enumerate() {
                    let mut e = vec![0u8; vars.len()];
                    e[c * w + l] = 1;
                    let k = Rat::from_integer(info.size.into()) / &dim;
                    u.add_term(e, table.value(x, c).scale(&k));
                }
                u
            })
            .collect();
        let scale = (&dim / &order) * (&dim / &order);
        total = total.add(&pt.substitute(&images).scale(&Cyc::from_rat(&scale)));
    }
    let mut poly = TruncPoly::zero(vars.clone(), max_deg);
    for (e, c) in total.terms() {
        let r = c
            .to_rat()
            .ok_or_else(|| Error::IrrationalResult(format!("coefficient of exponent {e:?}")))?;
        poly.add_term(e.clone(), r);
    }
    Ok(UntwistedPotential {
        label: g.label(),
        class_names: g.classes.iter().map(|c| c.name.clone()).collect(),
        max_level,
        max_deg,
        poly,
    })
}

/// [`eq56_potential`] checked against [`untwisted_potential`].
pub fn check_character_decomposition(n: u32, max_level: u32, max_deg: u32) -> Result<UntwistedPotential> {
    let g = GroupModel::binary_dihedral(n)?;
    let a = untwisted_potential(&g, max_level, max_deg);
    let b = eq56_potential(n, max_level, max_deg)?;
    a.compare(&b)?;
    Ok(a)
}
