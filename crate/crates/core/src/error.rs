use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An input lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A numerical procedure failed or produced a meaningless result.
    #[error("numerical failure: {0}")]
    Numeric(String),

    #[error("positivity fault at cell ({i}, {j}): rho = {rho:e}; retry with dt <= {suggested_dt:e}")]
    Positivity {
        i: usize,
        j: usize,
        rho: f64,
        suggested_dt: f64,
    },

    #[error("run became unstable at t = {time}: {reason}")]
    Unstable { time: f64, reason: String },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("{path}:{line}: {msg}")]
    Parse {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for errors caused by the numerics rather than by the inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Numeric(_) | Error::Positivity { .. } | Error::Unstable { .. }
        )
    }
}
