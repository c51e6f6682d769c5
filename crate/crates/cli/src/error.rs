//! CLI error type with the process exit-code mapping.
//!
//! Exit codes: 0 all certificates enclose, 1 usage/parse/validation
//! errors, 2 some hypothesis unsatisfied (informative), 3 enclosure
//! violation (an implementation bug).

use std::fmt;

#[derive(Debug)]
pub enum CliError {
    /// Malformed input text, anchored to a line and column.
    Parse {
        line: usize,
        column: usize,
        msg: String,
    },
    /// Well-formed input violating an instance invariant, anchored to a
    /// JSON path.
    Validation {
        path: String,
        msg: String,
    },
    Io(std::io::Error),
    Usage(String),
    Core(opframe::Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Parse { line, column, msg } => {
                write!(f, "parse error at line {line}, column {column}: {msg}")
            }
            CliError::Validation { path, msg } => write!(f, "invalid instance at {path}: {msg}"),
            CliError::Io(e) => write!(f, "io error: {e}"),
            CliError::Usage(msg) => write!(f, "usage error: {msg}"),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<opframe::Error> for CliError {
    fn from(e: opframe::Error) -> Self {
        CliError::Core(e)
    }
}

pub type CliResult<T> = Result<T, CliError>;
