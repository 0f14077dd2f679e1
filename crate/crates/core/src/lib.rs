//! Exact genus-0 orbifold Gromov–Witten correlators of `[C²/D̂ₙ]`.
//!
//! Three independent routes are implemented and cross-checked:
//! the root-system potential ([`mckay`]), WDVV induction ([`wdvv`]) and the
//! quantum Riemann–Roch graph expansion ([`qrr`]). Everything is computed in
//! exact rational or cyclotomic arithmetic ([`exact`]).

pub mod error;
pub mod exact;
pub mod fracbern;
pub mod group;
pub mod io;
pub mod mckay;
pub mod par;
pub mod qrr;
pub mod wdvv;

pub use error::{Error, Result};
pub use exact::{Cyc, Rat, TruncPoly};
pub use par::Exec;
