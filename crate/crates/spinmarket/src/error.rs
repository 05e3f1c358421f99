use std::io;
use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum AppError {
    #[error("config error: {0}")]
    Config(String),
    #[error("{context}: {source}")]
    Runtime {
        context: String,
        #[source]
        source: spinmarket_core::Error,
    },
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
}

impl AppError {
    pub fn runtime(context: impl Into<String>, source: spinmarket_core::Error) -> Self {
        AppError::Runtime {
            context: context.into(),
            source,
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        AppError::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code: 2 config, 3 runtime/statistics, 4 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            AppError::Config(_) => 2,
            AppError::Runtime { .. } => 3,
            AppError::Io { .. } => 4,
        }
    }
}

pub type Result<T> = std::result::Result<T, AppError>;
