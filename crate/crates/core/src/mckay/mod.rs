//! Root-system potential for `[C²/D̂ₙ]` and its type-A counterpart: positive
//! roots, linear forms `P_β`, exact correlator extraction and the
//! compatibility checks between groups.

mod checks;
mod potential;
mod roots;
mod table;

pub use checks::{
    closed_form_bb, closed_form_bb_printed, h_multiplication_check, restriction_check_a, restriction_check_d2n, yz_symmetry_check,
    CheckReport,
};
pub use potential::{p_beta, sqrt_two_minus_rho1, PBetaForm, Potential};
pub use roots::{positive_roots, type_a_roots, Root, RootSystem};
pub use table::{keys_of_length, keys_up_to, CorrelatorKey, CorrelatorTable};
