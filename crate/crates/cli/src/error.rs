use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("usage error: {0}")]
    Usage(String),
    #[error("{context}: {source}")]
    Model {
        context: String,
        #[source]
        source: ghz_budget::Error,
    },
    #[error("I/O error at {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("verification failed: {0}")]
    Verify(String),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }

    pub fn model(context: impl Into<String>, source: ghz_budget::Error) -> Self {
        CliError::Model { context: context.into(), source }
    }

    /// 0 success, 1 verify mismatch, 2 config/usage, 3 convergence, 4 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Verify(_) => 1,
            CliError::Config(_) | CliError::Usage(_) => 2,
            CliError::Model { source: ghz_budget::Error::Quadrature { .. }, .. } => 3,
            CliError::Model { .. } => 2,
            CliError::Io { .. } => 4,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
