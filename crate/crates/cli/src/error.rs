//! CLI-level errors and the exit-code contract.
//!
//! Exit 0: everything checked passed. Exit 1: a check ran and failed, or a
//! construction's mathematical hypothesis does not hold. Exit 2: the input
//! or usage was wrong (parse errors, unresolved references, shape errors).

use std::fmt;

use trilie_core::Error as CoreError;

#[derive(Debug)]
pub enum CliError {
    Parse(String),
    UnresolvedReference(String),
    Shape(String),
    Io(String),
    Usage(String),
    /// A mathematical hypothesis failed (not invertible, not a trace map,
    /// validation failure, ...): the command checked something and it is
    /// false.
    Failed(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Parse(m) => write!(f, "parse error: {m}"),
            CliError::UnresolvedReference(m) => write!(f, "unresolved reference: {m}"),
            CliError::Shape(m) => write!(f, "shape mismatch: {m}"),
            CliError::Io(m) => write!(f, "io error: {m}"),
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Failed(m) => write!(f, "check failed: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Failed(_) => 1,
            _ => 2,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::ShapeMismatch(m) => CliError::Shape(m),
            CoreError::TooLarge(m) => CliError::Usage(m),
            other => CliError::Failed(other.to_string()),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
