//! Command-line front end for the `crossprod` library.

pub mod commands;
pub mod config;
pub mod cursor;
pub mod expr;
pub mod report;

use std::fmt;

pub use commands::{run, Outcome};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_PARSE: i32 = 3;
pub const EXIT_UNSUPPORTED: i32 = 4;

#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    Usage(String),
    Parse(String),
    /// A core error raised while answering a well-formed query.
    Core(crossprod::Error),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => EXIT_USAGE,
            CliError::Parse(_) => EXIT_PARSE,
            CliError::Core(_) => EXIT_UNSUPPORTED,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Parse(m) => write!(f, "parse error: {m}"),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<crossprod::Error> for CliError {
    fn from(e: crossprod::Error) -> Self {
        CliError::Core(e)
    }
}
