use thiserror::Error;

use crate::poly::Monomial;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("poly: zero polynomial has no leading monomial")]
    ZeroPolynomial,
    #[error("poly: cannot parse polynomial `{input}`: {reason}")]
    Parse { input: String, reason: String },

    #[error("groebner: all generators are zero")]
    ZeroIdeal,
    #[error("groebner: non-simple point set (points {0} and {1} coincide)")]
    NonSimplePoints(usize, usize),
    #[error("groebner: empty point set")]
    EmptyPointSet,
    #[error("groebner: infinite variety (no pure power of {0} among leading monomials)")]
    InfiniteVariety(&'static str),
    #[error("groebner: polynomial is not in the ideal (normal form {0})")]
    NotInIdeal(String),

    #[error("variety: polynomial has degree 0 in the eliminated variable")]
    DegreeZero,
    #[error("variety: non-finite variety")]
    NonFiniteVariety,
    #[error("variety: polynomial must be nonconstant")]
    ConstantPolynomial,
    #[error("variety: root finder did not converge after {iterations} iterations")]
    NoConvergence { iterations: usize, partial: Vec<num_complex::Complex64> },

    #[error("moment: missing moment ({0},{1})")]
    MissingMoment(u32, u32),
    #[error("moment: moment ({0},{1}) is not the conjugate of ({1},{0})")]
    Asymmetric(u32, u32),
    #[error("moment: gamma_00 must be real and positive")]
    NonPositiveMass,
    #[error("moment: index ({0},{1}) exceeds degree 2k = {2}")]
    IndexOutOfRange(u32, u32, u32),
    #[error("moment: polynomial of degree {degree} exceeds 2k = {limit}")]
    DegreeOverflow { degree: u32, limit: u32 },
    #[error("moment: k must be positive")]
    ZeroOrder,

    #[error("solver: no representing measure supported on the variety ({0})")]
    NoMeasureOnVariety(String),
    #[error("solver: {0}")]
    InvalidMeasure(String),
    #[error("solver: polynomial {monomial} term exceeds degree bound {bound}")]
    DegreeBound { monomial: Monomial, bound: u32 },
}

pub type Result<T> = std::result::Result<T, Error>;
