use std::fmt;
use std::io;

/// Exit status for a successful run.
pub const EXIT_OK: i32 = 0;
/// Exit status when a requested check fails.
pub const EXIT_CHECK_FAILED: i32 = 1;
/// Exit status for invalid flags or unusable paths.
pub const EXIT_USAGE: i32 = 2;
/// Exit status when a computation fails.
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    /// One or more verification checks failed. The report is already printed.
    CheckFailed {
        failed: usize,
    },
    Numerical(imani_core::Error),
    Io {
        path: Option<String>,
        source: io::Error,
    },
    Csv(csv::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io { .. } => EXIT_USAGE,
            CliError::CheckFailed { .. } => EXIT_CHECK_FAILED,
            CliError::Numerical(_) | CliError::Csv(_) => EXIT_NUMERICAL,
        }
    }

    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "usage error: {msg}"),
            CliError::CheckFailed { failed } => write!(f, "{failed} check(s) failed"),
            CliError::Numerical(e) => write!(f, "numerical failure: {e}"),
            CliError::Io {
                path: Some(p),
                source,
            } => write!(f, "{p}: {source}"),
            CliError::Io { path: None, source } => write!(f, "i/o error: {source}"),
            CliError::Csv(e) => write!(f, "csv error: {e}"),
        }
    }
}

impl std::error::Error for CliError {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            CliError::Numerical(e) => Some(e),
            CliError::Io { source, .. } => Some(source),
            CliError::Csv(e) => Some(e),
            _ => None,
        }
    }
}

impl From<imani_core::Error> for CliError {
    fn from(e: imani_core::Error) -> Self {
        CliError::Numerical(e)
    }
}

impl From<imani_core::QuadError> for CliError {
    fn from(e: imani_core::QuadError) -> Self {
        CliError::Numerical(e.into())
    }
}

impl From<io::Error> for CliError {
    fn from(source: io::Error) -> Self {
        CliError::Io { path: None, source }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        match e.kind() {
            csv::ErrorKind::Io(_) => match e.into_kind() {
                csv::ErrorKind::Io(source) => CliError::Io { path: None, source },
                _ => unreachable!(),
            },
            _ => CliError::Csv(e),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
