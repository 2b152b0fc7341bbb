//! Command-line laboratory around [`inerton_core`]: loads a TOML
//! configuration, runs one of five scenarios and writes static artifacts
//! (CSV tables, SVG figures, verification reports) into an output directory.
//!
//! Every artifact is byte-deterministic: the same configuration produces the
//! same bytes on every run, so outputs can be pinned by golden files.
//!
//! Exit codes of the `inertonlab` binary:
//!
//! | code | meaning |
//! |------|---------|
//! | 0    | success |
//! | 1    | invalid configuration or command line |
//! | 2    | verification failure (a check exceeded its tolerance) |
//! | 3    | I/O failure (unreadable config, unwritable output) |

use thiserror::Error;

pub mod config;
pub mod csv;
pub mod report;
pub mod scenario;
pub mod svg;
pub mod verify;

/// Top-level failure of a CLI run, mapped onto the exit-code contract.
#[derive(Debug, Error)]
pub enum CliError {
    /// The configuration file or a derived parameter is invalid (exit 1).
    #[error("invalid configuration: {0}")]
    Config(String),

    /// The verification suite found failing checks (exit 2).
    #[error("verification failed: {0}")]
    Verification(String),

    /// Reading inputs or writing artifacts failed (exit 3).
    #[error("i/o failure: {0}")]
    Io(String),
}

impl CliError {
    /// Exit code the binary terminates with for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 1,
            CliError::Verification(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

/// Result alias for CLI operations.
pub type CliResult<T> = std::result::Result<T, CliError>;
