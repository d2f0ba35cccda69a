use std::path::PathBuf;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    /// A pair expected to be inequivalent was not refuted.
    #[error("verdict mismatch: {0}")]
    Mismatch(String),
    #[error("internal invariant failure: {0}")]
    Internal(String),
    #[error("{0}: {1}")]
    Io(PathBuf, std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io(..) => 1,
            CliError::Mismatch(_) => 2,
            CliError::Internal(_) => 3,
        }
    }
}

impl From<anosov_core::Error> for CliError {
    fn from(e: anosov_core::Error) -> Self {
        match e {
            anosov_core::Error::NonConvergence { .. } => CliError::Internal(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}
