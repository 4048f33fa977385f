//! Error-to-exit-code mapping of the CLI.

use std::fmt;

/// CLI failure classes. Exit codes: 1 I/O, 2 parse / unknown check,
/// 3 validation, 4 blow-up guard.
#[derive(Debug)]
pub enum CliError {
    Io(String),
    Parse(String),
    Validation(String),
    BlowUp(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io(_) => 1,
            CliError::Parse(_) => 2,
            CliError::Validation(_) => 3,
            CliError::BlowUp(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Io(m) => write!(f, "io error: {m}"),
            CliError::Parse(m) => write!(f, "config error: {m}"),
            CliError::Validation(m) => write!(f, "validation error: {m}"),
            CliError::BlowUp(m) => write!(f, "{m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<helical_ns::Error> for CliError {
    fn from(e: helical_ns::Error) -> Self {
        match e {
            helical_ns::Error::BlowUp { .. } => CliError::BlowUp(e.to_string()),
            other => CliError::Validation(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}
