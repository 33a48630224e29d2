use std::path::{Path, PathBuf};

use thiserror::Error;

/// Failures of a command, grouped by the exit code they map to.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("invalid input {}: {message}", path.display())]
    Validation { path: PathBuf, message: String },
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("{0}")]
    Numeric(#[from] lta_core::Error),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Validation { .. } | CliError::Invalid(_) | CliError::Io { .. } => 3,
            CliError::Numeric(e) => match e {
                lta_core::Error::DimensionMismatch { .. } | lta_core::Error::NotDominatingReference { .. } => 3,
                _ => 4,
            },
        }
    }

    pub fn validation(path: &Path, message: impl Into<String>) -> Self {
        CliError::Validation { path: path.to_path_buf(), message: message.into() }
    }

    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io { path: path.to_path_buf(), source }
    }
}

pub type CliResult<T> = Result<T, CliError>;
