//! Error type shared by every module of the crate.

use thiserror::Error;

/// Failure modes of constructions and checked preconditions.
///
/// Checkers report axiom violations through [`crate::report::Report`], not
/// through this type; an `Error` means an operation could not produce its
/// result at all.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("containment violation: {0}")]
    ContainmentViolation(String),
    #[error("not invertible: {0}")]
    NotInvertible(String),
    #[error("not admissible: {0}")]
    NotAdmissible(String),
    #[error("not a Nijenhuis operator: {0}")]
    NotNijenhuis(String),
    #[error("not a trace map: {0}")]
    NotTrace(String),
    #[error("validation failure: {0}")]
    ValidationFailure(String),
    #[error("differential formulas disagree: {0}")]
    FormulaDisagreement(String),
    #[error("cochain space too large: {0}")]
    TooLarge(String),
}

pub type Result<T> = std::result::Result<T, Error>;
