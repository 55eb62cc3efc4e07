use std::path::Path;

use acng_core::Error as CoreError;

pub type CliResult<T> = Result<T, CliError>;

/// Failures of a command, grouped by process exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad flags, parameter violations, unreadable paths.
    #[error("{0}")]
    Usage(String),
    /// Malformed or unusable input data.
    #[error("{0}")]
    Format(String),
    /// A structural check found violations.
    #[error("{0}")]
    Verification(String),
}

impl CliError {
    pub const EXIT_USAGE: i32 = 1;
    pub const EXIT_FORMAT: i32 = 2;
    pub const EXIT_VERIFICATION: i32 = 3;

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => Self::EXIT_USAGE,
            CliError::Format(_) => Self::EXIT_FORMAT,
            CliError::Verification(_) => Self::EXIT_VERIFICATION,
        }
    }

    pub fn io(path: &Path, err: std::io::Error) -> Self {
        CliError::Usage(format!("{}: {err}", path.display()))
    }

    /// A core error raised while loading `path`.
    pub fn data(path: &Path, err: CoreError) -> Self {
        let msg = format!("{}: {err}", path.display());
        match err {
            CoreError::InvalidParameter(_) | CoreError::TooLarge { .. } => CliError::Usage(msg),
            _ => CliError::Format(msg),
        }
    }
}

impl From<CoreError> for CliError {
    fn from(err: CoreError) -> Self {
        let msg = err.to_string();
        match err {
            CoreError::Format { .. }
            | CoreError::EmptyDataset
            | CoreError::RaggedData { .. }
            | CoreError::NonFinite { .. }
            | CoreError::DuplicatePoints { .. } => CliError::Format(msg),
            CoreError::DimensionMismatch { .. }
            | CoreError::InvalidParameter(_)
            | CoreError::TooLarge { .. }
            | CoreError::QueryOutsideTau { .. }
            | CoreError::Irreparable { .. } => CliError::Usage(msg),
        }
    }
}
