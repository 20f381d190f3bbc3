//! Numerical Opdam–Cherednik harmonic analysis.
//!
//! The crate evaluates the Opdam–Cherednik transform, its generalized
//! translation and convolution, the windowed transform built from them, and
//! checks a battery of uncertainty inequalities for the windowed transform on
//! truncated quadrature grids.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod grid;
pub mod params;
pub mod presets;
pub mod quadrature;
pub mod report;
pub mod specfun;
pub mod transform;
pub mod translation;
pub mod uncertainty;
pub mod windowed;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use params::Params;
