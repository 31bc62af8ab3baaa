use std::fmt;
use std::path::{Path, PathBuf};

/// Failure of a CLI command, carrying its exit code class.
#[derive(Debug)]
pub enum CliError {
    /// Reading or writing a file failed. Exit code 2.
    Io { path: PathBuf, source: std::io::Error },
    /// Malformed input file or config, or a missing required input. Exit code 2.
    Parse(String),
    /// Well-formed input violating a domain or constraint check. Exit code 1.
    Domain(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Domain(_) => 1,
            CliError::Io { .. } | CliError::Parse(_) => 2,
        }
    }

    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.to_owned(),
            source,
        }
    }

    /// Attaches the offending file to a library error.
    pub fn in_file(path: &Path, err: schatten_core::Error) -> Self {
        match CliError::from(err) {
            CliError::Parse(msg) => CliError::Parse(format!("{}: {msg}", path.display())),
            CliError::Domain(msg) => CliError::Domain(format!("{}: {msg}", path.display())),
            other => other,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Io { path, source } => write!(f, "{}: {source}", path.display()),
            CliError::Parse(msg) | CliError::Domain(msg) => f.write_str(msg),
        }
    }
}

impl std::error::Error for CliError {}

impl From<schatten_core::Error> for CliError {
    fn from(err: schatten_core::Error) -> Self {
        match err {
            schatten_core::Error::Parse(msg) => CliError::Parse(msg),
            other => CliError::Domain(other.to_string()),
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(err: csv::Error) -> Self {
        CliError::Io {
            path: PathBuf::from("<csv>"),
            source: std::io::Error::other(err.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
