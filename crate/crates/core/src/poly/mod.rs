//! Exact polynomial algebra over the rationals.

pub mod bivar;
pub mod sturm;
pub mod univar;

pub use bivar::{to_rational, BivarPoly};
pub use sturm::{isolate_real_roots, RootInterval};
pub use univar::UniPoly;
