use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid flag: {0}")]
    InvalidFlag(String),
    #[error("unknown solver '{0}'")]
    UnknownSolver(String),
    #[error("{path}:{line}: {message}")]
    Parse { path: String, line: u64, message: String },
    #[error("solver did not converge: {0}")]
    NotConverged(String),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::InvalidFlag(_) | CliError::UnknownSolver(_) => 2,
            CliError::Parse { .. } => 3,
            CliError::NotConverged(_) => 4,
            CliError::Io { .. } => 5,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }
}
