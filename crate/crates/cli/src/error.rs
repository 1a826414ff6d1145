use std::path::{Path, PathBuf};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config: {0}")]
    Parse(String),

    #[error("config key `{key}`: {message}")]
    Key { key: String, message: String },

    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },

    #[error("writing {}: {message}", path.display())]
    Output { path: PathBuf, message: String },

    #[error(transparent)]
    Core(#[from] rd_interval::Error),

    /// The solver stopped early; the partial outputs were written.
    #[error("{source} (partial outputs written up to t = {t})")]
    Partial { t: f64, source: rd_interval::Error },
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        Self::Io { path: path.to_path_buf(), source }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
