//! WDVV equations for `[C²/D̂ₙ]` and `[C³/Dₙ]`: pairing, λ-graded residuals,
//! and the length-by-length induction that rebuilds every correlator from a
//! seed set.

mod band;
mod expand;
mod linsys;
mod pairing;
mod solve;

pub use band::{dn_band_matrix, phi, phi_orbit_structure, BandSystem, OrbitType, PhiPath};
pub use expand::{all_instances, residual_failures, wdvv_residual, LambdaValue, WdvvInstance};
pub use linsys::LinearSystem;
pub use pairing::{pairing, Pairing};
pub use solve::{
    induction_solve, induction_solve_ordered, solver_equals_formula, seed_correlators, LengthStats, Mode, RowOrder, SeedSet, SolveReport, SolverComparison,
};
