use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] spectral_abstraction::Error),
    #[error("{path}: line {line}: {source}")]
    AtLine {
        path: PathBuf,
        line: u64,
        source: spectral_abstraction::Error,
    },
    #[error("{path}: line {line}: {message}")]
    Parse { path: PathBuf, line: u64, message: String },
    #[error("{path}: entry ({i}, {j}) differs from ({j}, {i}) by {diff:e}")]
    AsymmetricMatrix { path: PathBuf, i: usize, j: usize, diff: f64 },
    #[error("invalid level spec '{spec}': {message}")]
    InvalidLevelSpec { spec: String, message: String },
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {message}")]
    Io { path: PathBuf, message: String },
}

impl CliError {
    /// Machine-readable error code.
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Core(e) | CliError::AtLine { source: e, .. } => e.code(),
            CliError::Parse { .. } => "ParseError",
            CliError::AsymmetricMatrix { .. } => "AsymmetricMatrix",
            CliError::InvalidLevelSpec { .. } => "InvalidLevelSpec",
            CliError::Usage(_) => "UsageError",
            CliError::Io { .. } => "IoError",
        }
    }

    pub(crate) fn io(path: &std::path::Path, e: impl std::fmt::Display) -> Self {
        CliError::Io { path: path.to_path_buf(), message: e.to_string() }
    }

    /// `{"error": code, "detail": text}`.
    pub fn to_json(&self) -> String {
        #[derive(serde::Serialize)]
        struct Report<'a> {
            error: &'a str,
            detail: String,
        }
        serde_json::to_string(&Report { error: self.code(), detail: self.to_string() }).expect("plain strings serialize")
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
