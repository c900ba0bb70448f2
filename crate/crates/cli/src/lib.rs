//! Corpus runner and command-line front end for `prosol`.

use std::path::Path;

use thiserror::Error;

pub mod checks;
pub mod commands;
pub mod config;
pub mod corpus;
pub mod explain;
pub mod report;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {msg}")]
    Io { path: String, msg: String },
    #[error("config: {0}")]
    Config(String),
    #[error("corpus: {0}")]
    Corpus(String),
    #[error("entry `{name}`: {message}")]
    Entry { name: String, message: String },
    #[error("no corpus entry named `{0}`")]
    UnknownEntry(String),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Run(String),
}

impl CliError {
    /// 2 for input and usage problems, 1 for computations that failed.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Run(_) => 1,
            _ => 2,
        }
    }
}

pub fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        msg: e.to_string(),
    })
}
