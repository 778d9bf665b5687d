//! Exact matrix realizations of the groups, the identities behind the
//! obstruction arguments, and brute-force oracles over small prime fields.

pub mod checks;
pub mod finite;
pub mod matrix;
pub mod scalar;

pub use matrix::{exp_nilpotent, ExactMatrix, MatGroup};
pub use scalar::{Ring, Scalar};
