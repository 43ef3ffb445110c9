use std::fmt;

use tranche_core::{Error as CoreError, Violation};

/// Process exit status for a successful run.
pub const EXIT_OK: i32 = 0;
/// Bad arguments, bad values, or an invalid portfolio.
pub const EXIT_CONFIG: i32 = 2;
/// A file could not be read, written or parsed.
pub const EXIT_IO: i32 = 3;
/// A size or order limit was exceeded.
pub const EXIT_GUARD: i32 = 4;

/// Where in an input file a problem sits. Lines and columns are 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Position {
    Line(u64),
    Column { line: u64, column: u64 },
    Field { line: u64, field: String },
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Position::Line(line) => write!(f, "line {line}"),
            Position::Column { line, column } => write!(f, "line {line}, column {column}"),
            Position::Field { line, field } => write!(f, "line {line}, field '{field}'"),
        }
    }
}

#[derive(Debug)]
pub enum CliError {
    Config(String),
    InvalidPortfolio(Vec<Violation>),
    Io {
        path: String,
        source: std::io::Error,
    },
    Parse {
        path: String,
        position: Option<Position>,
        message: String,
    },
    Guard(String),
    Numeric(CoreError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::InvalidPortfolio(_) | CliError::Numeric(_) => EXIT_CONFIG,
            CliError::Io { .. } | CliError::Parse { .. } => EXIT_IO,
            CliError::Guard(_) => EXIT_GUARD,
        }
    }

    pub(crate) fn parse(path: &str, position: Option<Position>, message: impl Into<String>) -> Self {
        CliError::Parse {
            path: path.to_owned(),
            position,
            message: message.into(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "configuration error: {msg}"),
            CliError::InvalidPortfolio(v) => {
                write!(
                    f,
                    "invalid portfolio ({} violation{})",
                    v.len(),
                    if v.len() == 1 { "" } else { "s" }
                )?;
                for violation in v {
                    write!(f, "\n  {violation}")?;
                }
                Ok(())
            }
            CliError::Io { path, source } => write!(f, "{path}: {source}"),
            CliError::Parse {
                path,
                position: Some(p),
                message,
            } => write!(f, "{path}: {p}: {message}"),
            CliError::Parse {
                path,
                position: None,
                message,
            } => write!(f, "{path}: {message}"),
            CliError::Guard(msg) => write!(f, "limit exceeded: {msg}"),
            CliError::Numeric(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for CliError {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            CliError::Io { source, .. } => Some(source),
            CliError::Numeric(e) => Some(e),
            _ => None,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::InvalidPortfolio(v) => CliError::InvalidPortfolio(v),
            CoreError::Guard { .. } => CliError::Guard(e.to_string()),
            other => CliError::Numeric(other),
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
