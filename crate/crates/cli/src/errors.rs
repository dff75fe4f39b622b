//! Exit-code policy.
//!
//! * 0 — success
//! * 1 — runtime failure (I/O, construction failure, non-convergence)
//! * 2 — usage error (bad flags, bad parameters, mismatched shapes)
//! * 3 — parse error in an input file

use std::fmt;

use superpose_core::Error as CoreError;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Parse(String),
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Parse(_) => 3,
            CliError::Runtime(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "usage error: {msg}"),
            CliError::Parse(msg) => write!(f, "parse error: {msg}"),
            CliError::Runtime(msg) => write!(f, "error: {msg}"),
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::Parse { .. } => CliError::Parse(e.to_string()),
            CoreError::ShapeMismatch { .. }
            | CoreError::InvalidParameter { .. }
            | CoreError::DegenerateInput { .. }
            | CoreError::SingularColumn { .. }
            | CoreError::ZeroVector
            | CoreError::InvalidSparseVector { .. }
            | CoreError::EnumerationGuard { .. }
            | CoreError::NormBoundViolated { .. }
            | CoreError::NonMonotoneSigma { .. } => CliError::Usage(e.to_string()),
            CoreError::NonFiniteEntry { .. } | CoreError::ConstructionFailure { .. } => {
                CliError::Runtime(e.to_string())
            }
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}
