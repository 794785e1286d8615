use std::fmt;

use qleak_core::Error;

/// Failure classes, each with its own process exit code.
#[derive(Debug)]
pub enum CliError {
    /// Unreadable or invalid input, bad flags (exit 2).
    Input(String),
    /// The computation itself failed (exit 3).
    Numeric(String),
    /// Valid input the requested operation does not support (exit 4).
    Unsupported(String),
    /// `verify` found a failing property (exit 5).
    PropertyFailure(usize),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Numeric(_) => 3,
            CliError::Unsupported(_) => 4,
            CliError::PropertyFailure(_) => 5,
        }
    }

    /// Classifies an error raised while loading or validating inputs.
    pub fn input(e: Error) -> Self {
        match e {
            Error::UnsupportedDimension(_) | Error::DimensionOverflow(_) => CliError::Unsupported(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }

    /// Classifies an error raised by the computation on validated inputs.
    pub fn compute(e: Error) -> Self {
        match e {
            Error::UnsupportedDimension(_) | Error::DimensionOverflow(_) => CliError::Unsupported(e.to_string()),
            other => CliError::Numeric(other.to_string()),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "invalid input: {m}"),
            CliError::Numeric(m) => write!(f, "numerical failure: {m}"),
            CliError::Unsupported(m) => write!(f, "unsupported: {m}"),
            CliError::PropertyFailure(n) => write!(f, "{n} property check(s) failed"),
        }
    }
}

impl std::error::Error for CliError {}

pub type CliResult<T> = std::result::Result<T, CliError>;

pub fn io_error(what: &str, e: impl fmt::Display) -> CliError {
    CliError::Input(format!("{what}: {e}"))
}
