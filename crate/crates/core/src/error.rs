//! Error type shared by every module of the library.

use thiserror::Error;

/// Failures reported by the geometric and spectral routines.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument is outside the documented domain of an operation.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A model conversion was asked to map a point too close to its singular point.
    #[error("near-singular transform: {0}")]
    NearSingularTransform(String),

    /// The chart Jacobian is rank deficient or badly conditioned.
    #[error("degenerate immersion at parameter {param:?}: {reason}")]
    DegenerateImmersion { param: Vec<f64>, reason: String },

    /// A discretization is too coarse to support the requested estimate.
    #[error("insufficient resolution: {0}")]
    Resolution(String),

    /// A hypothesis required by a check is not satisfied by the input.
    #[error("precondition failed: {0}")]
    Precondition(String),

    /// Mollification broke one of the approximation budgets.
    #[error("mollification with sigma = {sigma} failed {failed}; try a smaller sigma")]
    Mollification { sigma: f64, failed: String },

    /// A simplex could not be assembled.
    #[error("assembly failed on simplex {simplex}: {reason}")]
    Assembly { simplex: usize, reason: String },

    /// The eigen iteration did not converge.
    #[error("solver failed: {message} (residual history: {history:?})")]
    Solver { message: String, history: Vec<f64> },

    /// A candidate domain reaches the boundary of its host region.
    #[error("containment violated: {0}")]
    Containment(String),

    /// Reading or parsing an input file failed.
    #[error("{path}: {message}")]
    File { path: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}
