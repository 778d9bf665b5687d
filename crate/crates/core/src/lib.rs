//! Verification engine for the combinatorics of Bessel-model support on
//! split orthogonal and quasi-split unitary groups.
//!
//! The crate enumerates left cosets `W / W_M` of signed-permutation Weyl
//! groups, runs the root-theoretic obstruction calculus on each coset, builds
//! Langlands chains between associate parabolic subsets, and checks the
//! matrix identities behind all of it in exact arithmetic.

pub mod chain;
pub mod datum;
pub mod error;
pub mod matgroup;
pub mod roots;
pub mod support;
pub mod weyl;

pub use datum::{make_config, BesselDatum, Config, GroupDatum, GroupKind, LeviDatum};
pub use error::{Error, Result};
pub use roots::Root;
pub use weyl::{CosetNormalForm, SignedPerm, W2};
