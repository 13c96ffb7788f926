use thiserror::Error;

/// Errors produced by the analysis routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A matrix that must be inverted is singular. `t` is set when the
    /// failure happened while evaluating a process at a given time.
    #[error("singular map{}", .t.map(|t| format!(" at t = {t}")).unwrap_or_default())]
    SingularMap { t: Option<f64> },

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("unsupported: {0}")]
    Unsupported(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
