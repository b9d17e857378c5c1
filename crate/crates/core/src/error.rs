use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the geometry, quadrature, solver and bound routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("invalid isoperimetric profile: {0}")]
    InvalidProfile(String),

    #[error("value {value} is outside the range of the a.i.f. (supremum {sup})")]
    Range { value: f64, sup: f64 },

    #[error("eigenvalue search failed: {0}")]
    Search(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// True for errors that come from the numerical machinery rather than from bad input.
    pub fn is_numeric(&self) -> bool {
        matches!(self, Error::Numeric(_) | Error::Search(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
