use std::fmt;

use sctk_core::Error as CoreError;

/// Failure of a run, grouped into categories with distinct exit codes.
#[derive(Debug)]
pub enum CliError {
    /// Malformed input: run config, surface file, θ literal.
    Parse(String),
    /// Well-formed input that names an invalid model or parameter.
    Invalid(String),
    /// A computation could not be completed as requested.
    Compute(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => exit::PARSE,
            CliError::Invalid(_) => exit::INVALID,
            CliError::Compute(_) => exit::COMPUTE,
            CliError::Io(_) => exit::IO,
        }
    }
}

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    /// The run finished but at least one check failed.
    pub const CHECK_FAILED: i32 = 1;
    pub const PARSE: i32 = 2;
    pub const INVALID: i32 = 3;
    pub const COMPUTE: i32 = 4;
    pub const IO: i32 = 5;
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Parse(m) => write!(f, "parse error: {m}"),
            CliError::Invalid(m) => write!(f, "invalid input: {m}"),
            CliError::Compute(m) => write!(f, "computation failed: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        let msg = e.to_string();
        match e {
            CoreError::Parse(m) => CliError::Parse(m),
            CoreError::MalformedPermutation { .. } => CliError::Parse(msg),
            CoreError::InvalidField(_)
            | CoreError::FieldMismatch(..)
            | CoreError::NotTransitive
            | CoreError::NoMarkedPoints(_)
            | CoreError::InvalidModel(_)
            | CoreError::Determinant { .. }
            | CoreError::InvalidArgument(_)
            | CoreError::ZeroInput(_) => CliError::Invalid(msg),
            _ => CliError::Compute(msg),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
