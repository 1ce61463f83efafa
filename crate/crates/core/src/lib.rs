//! Decide whether a truncated complex moment sequence with a polynomial column
//! relation admits a finitely atomic representing measure, and extract it.
//!
//! The pipeline: the zero set of the column relation `p(z, z̄)` is computed by
//! resultant elimination ([`variety`]), the reduced Gröbner basis of its
//! vanishing ideal by Buchberger–Möller ([`groebner`]), and the moment-level
//! conditions attached to each basis element are checked against the moment
//! matrix ([`moment`], [`solver`]).

pub mod error;
pub mod groebner;
pub mod moment;
pub mod poly;
pub mod scalar;
pub mod solver;
pub mod variety;

mod linalg;

pub use error::{Error, Result};
pub use scalar::{Complex64, GaussianRational, Scalar};
