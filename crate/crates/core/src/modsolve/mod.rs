//! The modular system sum_d d*u_d = 0 mod 2^l - 1 behind the first slope:
//! solutions, their supports, minimum weights, densities, and enumeration of
//! minimal irreducible solutions up to shift.

mod bounds;
mod enumerate;
mod oracle;
mod search;
mod set;
mod solution;

pub use bounds::{stabilization_bound, support_sum_lower_bound, support_sum_min};
pub use enumerate::{irreducible_solutions, minimal_irreducible_solutions, EnumOptions};
pub use oracle::{residue_distances, sigma_bfs, solutions_of_weight, BFS_MAX_LENGTH};
pub use search::{default_max_length, density, sigma, sigma_bounded, Density, Sigma};
pub use set::ExponentSet;
pub use solution::{ModSolution, SupportMap};

use thiserror::Error;

/// Longest solution length handled by the exact searches.
pub const MAX_LENGTH: u32 = 40;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModsolveError {
    #[error("exponent set is empty")]
    EmptySet,
    #[error("exponent {0} is not a positive odd integer")]
    BadMember(u32),
    #[error("cannot parse exponent set {0:?}")]
    BadSetSpec(String),
    #[error("length {len} outside 1..={max}")]
    LengthOutOfRange { len: u32, max: u32 },
    #[error("digit u_{d} = {u} does not fit in {len} bits")]
    DigitOverflow { d: u32, u: u64, len: u32 },
    #[error("digit ({d}, {r}) given twice")]
    DuplicateDigit { d: u32, r: u32 },
    #[error("exponent {0} given twice")]
    DuplicateExponent(u32),
    #[error("sum {total} is not a positive multiple of 2^{len} - 1")]
    NotASolution { total: u128, len: u32 },
    #[error("invalid bound arguments s={s}, l={len}")]
    BadBound { s: u32, len: u32 },
    #[error("density must be a positive rational at most 1, got {0}")]
    BadDensity(String),
}
