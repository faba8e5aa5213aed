use thiserror::Error;

/// Errors shared by every crate in the workspace.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("dimension {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("invalid register index {index} for {count} registers")]
    InvalidRegister { index: usize, count: usize },
    #[error("{what} of size {size} exceeds cap {cap}")]
    CapExceeded { what: &'static str, size: usize, cap: usize },
    #[error("operator is not positive semidefinite (min eigenvalue {0:.3e})")]
    NotPsd(f64),
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),
    #[error("invalid channel: {0}")]
    InvalidChannel(String),
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("{0} did not converge")]
    NoConvergence(&'static str),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
