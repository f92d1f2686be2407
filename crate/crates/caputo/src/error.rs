//! Error types shared across the crate.

use thiserror::Error;

/// Errors produced by solvers, weight construction and the special functions.
#[derive(Debug, Error)]
pub enum Error {
    /// Argument outside the mathematical domain of a function.
    #[error("domain error: {0}")]
    Domain(String),

    /// A series evaluation hit its term cap before reaching the tolerance.
    #[error("series did not converge after {terms} terms (last term {last_term:e})")]
    SeriesNonConvergence { terms: usize, last_term: f64 },

    /// Step or row index outside the valid range.
    #[error("index {index} invalid: {reason}")]
    Index { index: usize, reason: &'static str },

    /// Sample vector shorter than the queried weight row.
    #[error("sample vector of length {got} is too short, need at least {need}")]
    SampleLength { need: usize, got: usize },

    /// Newton iteration exhausted its budget.
    #[error("newton failed at step {step}: residual {residual:e} after {iters} iterations")]
    NonConvergence {
        step: usize,
        iters: u32,
        residual: f64,
    },

    /// The Newton matrix was numerically singular.
    #[error("singular jacobian at step {step}")]
    SingularJacobian { step: usize },

    /// Starting-weight system too ill-conditioned to trust.
    #[error("starting-weight system ill-conditioned (condition estimate {cond:e})")]
    IllConditioned { cond: f64 },

    /// Starting weights were built for a different grid or order.
    #[error("starting weights do not match this grid/order")]
    WeightMismatch,

    /// Bad run configuration (grid, sigma list, study spec, ...).
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// Problem id not present in the registry.
    #[error("unknown problem `{0}`")]
    UnknownProblem(String),

    /// Unknown report output format.
    #[error("unknown output format `{0}`")]
    UnknownFormat(String),

    /// Underlying I/O failure (CLI output paths).
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::InvalidConfig(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
