//! CLI error type mapping every failure onto the two exit classes: input
//! validation problems (exit 1) and computational failures (exit 2).

use icregions::error::Error as LibError;

pub type Result<T> = core::result::Result<T, CliError>;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad input: unreadable or malformed files, invalid probability or
    /// operator data, unsupported flag combinations.
    #[error("{0}")]
    Validation(String),

    /// The inputs were valid but the computation could not finish: solver
    /// non-convergence, unbounded regions, or resource caps.
    #[error("{0}")]
    Computation(String),
}

impl CliError {
    pub fn validation(msg: impl Into<String>) -> Self {
        CliError::Validation(msg.into())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Computation(_) => 2,
        }
    }
}

impl From<LibError> for CliError {
    fn from(e: LibError) -> Self {
        match e {
            LibError::NoConvergence { .. }
            | LibError::UnboundedRegion { .. }
            | LibError::CapExceeded { .. } => CliError::Computation(e.to_string()),
            other => CliError::Validation(other.to_string()),
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        // serde_json reports "... at line L column C" which callers rely on.
        CliError::Validation(format!("parse error: {e}"))
    }
}
