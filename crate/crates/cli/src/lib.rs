//! Library side of the `projquant` command: documents, commands and reports.

pub mod commands;
pub mod document;
pub mod report;

pub use commands::{run, Command, Options};
pub use document::ProblemDocument;
pub use report::{Check, Entry, Report, Verdict};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] projquant_core::Error),
}

impl CliError {
    /// 2 for input and usage errors, 3 for resonance errors.
    pub fn exit_code(&self) -> u8 {
        use projquant_core::Error;
        match self {
            CliError::Core(Error::ResonantDelta { .. } | Error::NoMatchingRow { .. }) => 3,
            _ => 2,
        }
    }
}
