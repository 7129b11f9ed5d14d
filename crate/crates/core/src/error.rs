use thiserror::Error;

/// Errors raised by the numerical kernel, the measurement model and the solvers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("unsupported matrix dimension {0} (expected 2 or 4)")]
    UnsupportedDimension(usize),

    #[error("expected {expected} entries, got {got}")]
    EntryCount { expected: usize, got: usize },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not positive semidefinite (eigenvalue {eigenvalue:e})")]
    NotPositive { eigenvalue: f64 },

    #[error("trace {trace} is not 1")]
    BadTrace { trace: f64 },

    #[error("sharpness {0} outside (0, 1]")]
    InvalidSharpness(f64),

    #[error("invalid scenario: {0}")]
    InvalidConfig(String),

    #[error("value {value} outside the domain of {what}")]
    Domain { what: &'static str, value: f64 },

    #[error("no sign change of f - {bound} on [{lo}, {hi}]")]
    NoSignChange { bound: f64, lo: f64, hi: f64 },

    #[error("grid step {0} outside (0, 0.1]")]
    InvalidGridStep(f64),

    #[error("{0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
