//! CLI error kinds mapped to process exit codes: 1 for validation problems,
//! 2 for numerical non-convergence.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),

    #[error("numerical non-convergence: {0}")]
    NonConvergence(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::NonConvergence(_) => 2,
            _ => 1,
        }
    }

    pub fn io(path: impl Into<String>) -> impl FnOnce(std::io::Error) -> CliError {
        let path = path.into();
        move |source| CliError::Io { path, source }
    }
}

impl From<frodo_core::Error> for CliError {
    fn from(err: frodo_core::Error) -> Self {
        match err {
            frodo_core::Error::NonConvergence { .. } => CliError::NonConvergence(err.to_string()),
            other => CliError::Validation(other.to_string()),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
