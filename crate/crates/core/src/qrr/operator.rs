//! Quantized Chern-character operators for the twist by `ρ₁` on `BD̂ₙ`.

use crate::exact::cyc::root_of_unity;
use crate::exact::rat::{factorial, ri};
use crate::exact::{bernoulli_number, bernoulli_poly, Rat};
use crate::group::{Family, GroupModel};
use crate::{Error, Result};
use num_traits::Zero;

/// `(A_{p+1}(V_{ρ₁}) z^p/(p+1)!)^∧ = D_p + (ħ²/2)·(quadratic part)`, with
/// `D_p = dilaton·∂_{[1],1+p} − Σ_γ linear[γ]·Σ_l t_l^{[γ]} ∂_{[γ],l+p}`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuantizationOp {
    pub p: u32,
    pub unit: usize,
    /// `2B_{p+1}/(p+1)!`.
    pub dilaton: Rat,
    /// `(B_{p+1}(age₁) + B_{p+1}(age₂))/(p+1)!` per class.
    pub linear: Vec<Rat>,
    /// Eigenvalue ages of each class on `V_{ρ₁}`.
    pub ages: Vec<(Rat, Rat)>,
    pub centralizer: Vec<usize>,
    pub inverse: Vec<usize>,
}

/// Ages `(k/M, (M−k)/M)` of a class of `SU(2)`, read off from the trace
/// `ζ^k + ζ^{−k}` of `ρ₁`; the identity has `(0, 0)`.
pub fn rho1_ages(g: &GroupModel) -> Result<Vec<(Rat, Rat)>> {
    if g.family != Family::BinaryDihedral {
        return Err(Error::UnsupportedPair(format!("ρ₁ ages need an SU(2) subgroup, got {}", g.label())));
    }
    let m = g.chars().modulus;
    let chi = g.rho1_char();
    let mut out = Vec::with_capacity(chi.len());
    for (c, x) in chi.iter().enumerate() {
        let k = (0..=m / 2)
            .find(|&k| &(&root_of_unity(m, k as i64) + &root_of_unity(m, -(k as i64))) == x)
            .ok_or_else(|| Error::IdentityViolation(format!("no eigenvalue pair for class {}", g.classes[c].name)))?;
        let mm = ri(m as i64);
        if k == 0 {
            out.push((Rat::zero(), Rat::zero()));
        } else {
            out.push((ri(k as i64) / &mm, ri((m - k) as i64) / &mm));
        }
    }
    Ok(out)
}

impl QuantizationOp {
    pub fn new(g: &GroupModel, p: u32) -> Result<QuantizationOp> {
        if p == 0 {
            return Err(Error::ParamTooSmall("Chern-character index must be >= 1".into()));
        }
        let ages = rho1_ages(g)?;
        let q = p as usize + 1;
        let f = Rat::from_integer(factorial(q as u64));
        let linear = ages
            .iter()
            .map(|(a, b)| (bernoulli_poly(q, a) + bernoulli_poly(q, b)) / &f)
            .collect();
        let nc = g.num_classes();
        Ok(QuantizationOp {
            p,
            unit: g.unit_class(),
            dilaton: ri(2) * bernoulli_number(q) / &f,
            linear,
            ages,
            centralizer: g.classes.iter().map(|c| c.centralizer).collect(),
            inverse: (0..nc).map(|c| g.inverse_class(c)).collect(),
        })
    }

    pub fn is_zero(&self) -> bool {
        self.dilaton.is_zero() && self.linear.iter().all(Zero::is_zero)
    }

    /// Coefficient of `∂_{[γ],l} ∂_{[γ⁻¹],p−1−l}` inside the `ħ²/2` bracket:
    /// `(−1)^l z(γ)·linear[γ]`.
    pub fn quadratic(&self, class: usize, l: u32) -> Rat {
        let v = ri(self.centralizer[class] as i64) * &self.linear[class];
        if l.is_multiple_of(2) {
            v
        } else {
            -v
        }
    }
}
