//! Scenario files, the verification runner and its outputs for the `ocwt`
//! command line tool.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::path::PathBuf;

pub mod output;
pub mod runner;
pub mod scenario;

/// Exit code when every check passed.
pub const EXIT_PASS: i32 = 0;
/// Exit code when a check failed.
pub const EXIT_FAIL: i32 = 1;
/// Exit code for unusable input.
pub const EXIT_CONFIG: i32 = 2;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {message}", path = path.display())]
    Io { path: PathBuf, message: String },
    #[error("line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("invalid scenario: {0}")]
    Validation(String),
}

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Compute(#[from] ocwt::Error),
    #[error("cannot write {path}: {message}", path = path.display())]
    Output { path: PathBuf, message: String },
}

impl RunError {
    /// Bad input maps to [`EXIT_CONFIG`]; anything else is a failed run.
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) => EXIT_CONFIG,
            RunError::Compute(ocwt::Error::InvalidParams(_) | ocwt::Error::Unsupported(_)) => EXIT_CONFIG,
            RunError::Compute(_) | RunError::Output { .. } => EXIT_FAIL,
        }
    }
}
