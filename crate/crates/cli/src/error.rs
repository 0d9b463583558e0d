use thiserror::Error;

pub type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage error: {0}")]
    Usage(String),

    #[error("configuration error: {0}")]
    Config(String),

    /// Raised while validating a config, before any computation.
    #[error("{0}")]
    Invalid(dplab_core::Error),

    #[error(transparent)]
    Core(dplab_core::Error),

    #[error("i/o error on {path}: {source}")]
    Io { path: String, source: std::io::Error },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl From<dplab_core::Error> for CliError {
    fn from(e: dplab_core::Error) -> Self {
        CliError::Invalid(e)
    }
}

impl CliError {
    /// 2 for usage and configuration problems, 1 for failures while running.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Config(_) | CliError::Invalid(_) => 2,
            _ => 1,
        }
    }

    pub(crate) fn io(path: &std::path::Path, source: std::io::Error) -> Self {
        CliError::Io { path: path.display().to_string(), source }
    }
}

/// Marks core errors raised during a run (exit code 1).
pub(crate) trait Running<T> {
    fn running(self) -> CliResult<T>;
}

impl<T> Running<T> for dplab_core::Result<T> {
    fn running(self) -> CliResult<T> {
        self.map_err(CliError::Core)
    }
}
