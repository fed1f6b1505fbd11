use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument outside the domain of a correlation or formula.
    #[error("domain error: {0}")]
    Domain(String),

    /// Structurally valid input that violates a model invariant.
    #[error("invalid input: {0}")]
    Validation(String),

    /// No feasible design exists for the given constraints.
    #[error("design infeasible: {0}")]
    Design(String),

    #[error("{}:{line}: {message}", path.display())]
    Parse { path: PathBuf, line: usize, message: String },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub(crate) fn design(msg: impl Into<String>) -> Self {
        Error::Design(msg.into())
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Domain(_) | Error::Validation(_) | Error::Parse { .. } | Error::Io { .. } => 2,
            Error::Design(_) => 3,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
