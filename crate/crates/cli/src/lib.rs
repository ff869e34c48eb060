//! Library side of the `lensbordant` command: argument readers, command
//! wrappers and the batch scanner.

pub mod commands;
pub mod input;
pub mod scan;

pub use commands::Outcome;
pub use scan::{cmd_scan, KnotInput, ScanCandidate, ScanEntry, ScanReport};

/// Failures split by exit code: bad arguments versus failed computations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    Usage(String),
    Compute(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Compute(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Compute(m) => f.write_str(m),
        }
    }
}

impl From<lensbordant::Error> for CliError {
    fn from(e: lensbordant::Error) -> Self {
        match e {
            lensbordant::Error::Capacity { .. } => CliError::Compute(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}
