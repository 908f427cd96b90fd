//! Verification pipeline and JSON reports for the `drinfeld` command.

pub mod config;
pub mod pipeline;
pub mod report;

use thiserror::Error;

pub use config::{Instance, RunConfig};
pub use report::{Report, Status, Verdict};

/// Environment variable naming a directory for report files.
pub const OUT_DIR_ENV: &str = "DRINFELD_OUT_DIR";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] drinfeld_core::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: serde::Serialize>(value: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}
