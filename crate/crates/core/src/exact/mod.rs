//! Exact scalars: rationals, cyclotomic numbers, Bernoulli data, tangent
//! derivative polynomials, truncated multivariate polynomials and exact
//! interpolation.

pub mod bernoulli;
pub mod cyc;
pub mod interp;
pub mod rat;
pub mod trig;
pub mod trunc;
pub mod upoly;

pub use bernoulli::{bernoulli_number, bernoulli_poly};
pub use cyc::{cyclotomic_polynomial, root_of_unity, Cyc};
pub use rat::Rat;
pub use trig::{cot_exact, h_derivative, tan_exact, tan_poly, TanPoly};
pub use trunc::{Ring, TruncPoly};
