use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("invalid field `{field}`: {message}")]
    Validation { field: String, message: String },
    #[error("{0}")]
    Runtime(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn runtime(err: impl std::fmt::Display) -> Self {
        Self::Runtime(err.to_string())
    }

    /// Process exit code: 2 for rejected input, 1 for failures while running.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Parse { .. } | Self::Validation { .. } => 2,
            Self::Runtime(_) | Self::Io { .. } => 1,
        }
    }
}
