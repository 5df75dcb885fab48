use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A genericity condition failed; `stage` names the pipeline step and
    /// `locus` the vanishing condition.
    #[error("degenerate input at stage `{stage}`: {locus}")]
    Degenerate { stage: String, locus: String },

    #[error("no convergence after {iterations} iterations (worst residual {worst_residual:e})")]
    NoConvergence { iterations: usize, worst_residual: f64 },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("resource budget exceeded: {0}")]
    Resource(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("no known bound for `{0}`")]
    NoBound(String),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub fn degenerate(stage: impl Into<String>, locus: impl Into<String>) -> Self {
        Error::Degenerate { stage: stage.into(), locus: locus.into() }
    }

    pub fn numerical(msg: impl Into<String>) -> Self {
        Error::Numerical(msg.into())
    }

    /// True for errors caused by the caller's input rather than by the numerics.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidInput(_) | Error::Degenerate { .. } | Error::Unsupported(_) | Error::NoBound(_)
        )
    }
}
