//! Brute-force route to the Newton polygon: exponential sums over F_{q^m},
//! the exact L-polynomial, and its q-adic lower convex hull.

mod curve;
mod lpoly;
mod newton;
mod sums;

pub use curve::{parse_terms, CurvePoly};
pub use lpoly::{l_polynomial, l_polynomial_verified, LPolynomial};
pub use newton::NewtonPolygon;
pub use sums::{exponential_sum, exponential_sums_all, MAX_TABLE_BITS};

use thiserror::Error;

use crate::field::FieldError;

/// Largest absolute extension degree a*m for which sums are computed.
pub const MAX_SUM_DEGREE: u32 = 30;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ZetaError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("exponent {0} is even; the normal form only has odd exponents")]
    EvenExponent(u32),
    #[error("exponent {0} given twice")]
    DuplicateExponent(u32),
    #[error("exponent {exponent} exceeds the degree 2g+1 = {max}")]
    ExponentAboveDegree { exponent: u32, max: u32 },
    #[error("leading coefficient c_{0} is zero")]
    MissingLeading(u32),
    #[error("polynomial has no nonzero terms")]
    Empty,
    #[error("malformed coefficient list {0:?}, expected exponent:bits[,exponent:bits...]")]
    BadTerms(String),
    #[error("extension degree {0} exceeds the limit of 30")]
    ExtensionTooLarge(u32),
    #[error("coefficient table over {0} bits is too large")]
    TableTooLarge(u32),
    #[error("not enough exponential sums: need {needed}, got {got}")]
    MissingSums { needed: usize, got: usize },
    #[error("coefficient a_{0} of the L-polynomial is not an integer")]
    NonIntegral(usize),
    #[error("functional equation fails at a_{0}")]
    FunctionalEquation(usize),
    #[error("Weil bound fails at a_{0}")]
    WeilBound(usize),
    #[error("Newton polygon has a single vertex")]
    DegeneratePolygon,
}
