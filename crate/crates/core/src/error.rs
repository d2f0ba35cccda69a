use thiserror::Error;

/// Errors raised by the core operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("index out of range: {0}")]
    OutOfRange(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("malformed configuration: {0}")]
    Malformed(String),
    #[error("invalid crossing model: {0}")]
    InvalidModel(String),
    #[error("fixed-point iteration did not converge after {iterations} steps (residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },
    #[error("SA annulus has even length {0}; its boundary frame sign is undefined")]
    EvenLength(usize),
    #[error("s/u alternation broken at junction {0}")]
    Alternation(usize),
    #[error("not a cluster: {0}")]
    NotACluster(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_range(what: &str, value: i64, lo: i64, hi: i64) -> Result<()> {
    if value < lo || value > hi {
        return Err(Error::OutOfRange(format!("{what}={value} not in [{lo}, {hi}]")));
    }
    Ok(())
}
