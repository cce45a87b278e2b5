use std::path::Path;

use thiserror::Error;

/// Exit status for a command that ran to completion.
pub const EXIT_PASS: u8 = 0;
pub const EXIT_STAT_FAIL: u8 = 1;
pub const EXIT_CONFIG: u8 = 2;
pub const EXIT_IO: u8 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("invalid input: {0}")]
    Input(#[from] setbm::Error),
    #[error("i/o error on {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        Self::Io { path: path.display().to_string(), source }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Config(_) | Self::Input(_) => EXIT_CONFIG,
            Self::Io { .. } => EXIT_IO,
        }
    }
}
