use std::io;

use mimo_distortion::Error as CoreError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("numerical failure at snr={snr_db} dB, mode {mode}: {source}")]
    AtPoint { snr_db: f64, mode: &'static str, source: CoreError },
    #[error("numerical failure: {0}")]
    Numerical(CoreError),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("plot error: {0}")]
    Plot(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::AtPoint { .. } | CliError::Numerical(_) => 3,
            CliError::Io(_) | CliError::Csv(_) | CliError::Plot(_) => 1,
        }
    }
}

/// Core errors raised while building a request are configuration problems.
pub fn config_err(e: CoreError) -> CliError {
    CliError::Config(e.to_string())
}

pub type CliResult<T> = std::result::Result<T, CliError>;
