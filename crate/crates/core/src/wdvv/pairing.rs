use crate::exact::rat::Rat;
use crate::group::{Family, GroupModel};
use num_traits::Zero;

/// `η(γ, γ′) = ⟨e₁ e_γ e_γ′⟩` and its inverse, λ-stripped, with the λ-degree
/// of each entry.
#[derive(Clone, Debug)]
pub struct Pairing {
    pub eta: Vec<Vec<Rat>>,
    pub inv: Vec<Vec<Rat>>,
    /// λ-degree of `η(γ, γ⁻¹)` for `γ ≠ 1`, and of `η(1, 1)`.
    pub eta_degree: (i32, i32),
    /// λ-degree of a correlator without unit insertions.
    pub bulk_degree: i32,
}

impl Pairing {
    pub fn inv_degree(&self, unit: bool) -> i32 {
        if unit {
            -self.eta_degree.1
        } else {
            -self.eta_degree.0
        }
    }

    /// λ-degree of a three-point correlator with `units` unit insertions.
    pub fn three_point_degree(&self, units: usize) -> i32 {
        match units {
            0 => self.bulk_degree,
            3 => self.eta_degree.1,
            _ => self.eta_degree.0,
        }
    }

    pub fn is_diagonal(&self) -> bool {
        self.eta
            .iter()
            .enumerate()
            .all(|(i, row)| row.iter().enumerate().all(|(j, v)| i == j || v.is_zero()))
    }
}

/// Pairing of `[C²/D̂ₙ]` or `[C³/Dₙ]`. `g^{γ,γ⁻¹} = z(γ)`, and `[b]` pairs
/// with `[ab]` whenever `b⁻¹ ∈ [ab]`.
pub fn pairing(g: &GroupModel) -> Pairing {
    let k = g.num_classes();
    let mut eta = vec![vec![Rat::zero(); k]; k];
    let mut inv = vec![vec![Rat::zero(); k]; k];
    for c in 0..k {
        let d = g.inverse_class(c);
        let z = g.classes[c].centralizer;
        eta[c][d] = Rat::new(1.into(), z.into());
        inv[c][d] = Rat::from_integer(z.into());
    }
    let (eta_degree, bulk_degree) = match g.family {
        Family::BinaryDihedral => ((0, -2), 1),
        Family::Dihedral => ((-1, -3), 0),
        Family::Cyclic => ((0, -2), 1),
    };
    Pairing { eta, inv, eta_degree, bulk_degree }
}
