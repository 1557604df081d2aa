use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain where the quantity is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// Inputs are individually valid but cannot be combined (e.g. fields on
    /// different grids).
    #[error("usage error: {0}")]
    Usage(String),

    /// A quadrature could not reach its tolerance within the panel budget.
    #[error(
        "accuracy error: {context}: estimate {estimate:e} with error bound {error_bound:e} \
         exceeds tolerance after {panels} panels"
    )]
    Accuracy {
        context: String,
        estimate: f64,
        error_bound: f64,
        panels: usize,
    },

    /// Grid data carries spectral mass the grid cannot resolve.
    #[error("resolution error: {0}")]
    Resolution(String),

    #[error("cache error at {path}: {message}")]
    Cache { path: PathBuf, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }
}
