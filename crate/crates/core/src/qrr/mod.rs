//! Genus-0 quantum Riemann–Roch for the twist of `BD̂ₙ` by `ρ₁`.

mod chern;
mod hodge;
mod lthe;
mod operator;
mod untwisted;

pub use chern::{chern_insertion_sum, chern_integral, Route};
pub use hodge::{
    bb_polynomiality_check, bernoulli_sum_identities, closed_form_bb_poly, single_insertion_value, hodge_bb_correlator,
    hodge_report, HodgeReport, SIGN_CONVENTION,
};
pub use lthe::{lthe_enumerate, Lthe, Slot};
pub use operator::{rho1_ages, QuantizationOp};
pub use untwisted::{check_character_decomposition, eq56_potential, untwisted_correlator, untwisted_potential, UntwistedPotential};
