use std::process::ExitCode;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags, config values or input files.
    #[error("{0}")]
    Input(String),
    /// A library algorithm gave up on valid input.
    #[error("{0}")]
    Algorithm(asymlat_core::Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Algorithm(_) => ExitCode::from(3),
            _ => ExitCode::from(2),
        }
    }

    pub fn input(msg: impl Into<String>) -> CliError {
        CliError::Input(msg.into())
    }

    /// A library error raised while building inputs (windows, ħ values,
    /// snapshots) rather than by an algorithm.
    pub fn invalid(e: asymlat_core::Error) -> CliError {
        CliError::Input(e.to_string())
    }
}

impl From<asymlat_core::Error> for CliError {
    fn from(e: asymlat_core::Error) -> Self {
        CliError::Algorithm(e)
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
