//! CLI error type mapping onto the documented exit codes:
//! 0 success, 2 usage/parse error, 3 numeric/fit error.

use std::fmt;

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, unreadable input, malformed CSV/TOML. Exit code 2.
    Usage(String),
    /// Fit, training, or search failure. Exit code 3.
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numeric(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Numeric(m) => write!(f, "{m}"),
        }
    }
}

impl From<greyinn::Error> for CliError {
    fn from(e: greyinn::Error) -> Self {
        use greyinn::Error::*;
        match e {
            Param(_) | Shape(_) | TooShort { .. } | Range { .. } => CliError::Usage(e.to_string()),
            _ => CliError::Numeric(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;
