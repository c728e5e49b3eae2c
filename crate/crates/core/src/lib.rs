//! Newton polygons of curves y^2 + y = f(x) over binary fields, computed by
//! point counting, by a Frobenius-semilinear rank, and by closed-form case
//! tables, with a solver for the underlying modular-equation combinatorics.

pub mod field;
pub mod hasse;
pub mod modsolve;
pub mod rational;
pub mod selftest;
pub mod sweep;
pub mod vss;
pub mod zeta;
