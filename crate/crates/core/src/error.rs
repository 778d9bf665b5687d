use thiserror::Error;

/// Every failure the engine can report.
///
/// Counterexample-shaped variants (`NotFound`, `ClassificationGap`,
/// `ChainStuck`) are verification outcomes, not programming errors: they
/// mean a combinatorial claim failed on a concrete input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("range error: {0}")]
    Range(String),
    #[error("enumeration of {what} needs {needed} items, cap is {cap}")]
    CapExceeded { what: String, needed: u128, cap: u128 },
    #[error("operands belong to different groups")]
    MixedGroup,
    #[error("not found: {0}")]
    NotFound(String),
    #[error("classification gap at {coset}: {detail}")]
    ClassificationGap { coset: String, detail: String },
    #[error("chain stuck at step {step}: remainder {remainder} inverts no simple root outside theta")]
    ChainStuck { step: usize, remainder: String },
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error("matrix is not in the unipotent subgroup carrying the character")]
    NotInUell,
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
