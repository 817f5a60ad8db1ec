use thiserror::Error;

/// Failures of the command-line driver, each with its exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{input}:{line}: {msg}")]
    Parse { input: String, line: usize, msg: String },

    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },

    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Core(#[from] qwr_core::Error),

    #[error("audit failed: {}", .0.join("; "))]
    Audit(Vec<String>),
}

impl CliError {
    #[must_use]
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Audit(_) => 2,
            _ => 1,
        }
    }
}
