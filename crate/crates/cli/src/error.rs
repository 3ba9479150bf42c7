use std::io;
use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("cannot read config {path}: {source}")]
    ConfigRead { path: PathBuf, source: io::Error },
    #[error("cannot parse config {path}: {source}")]
    ConfigParse {
        path: PathBuf,
        source: serde_json::Error,
    },
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: io::Error },
    #[error(transparent)]
    Solver(#[from] convfem::Error),
}

impl CliError {
    /// 2 for anything the user can fix in the input, 3 for a singular
    /// system, 1 for IO failures on output.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Solver(convfem::Error::SingularSystem { .. }) => 3,
            CliError::Write { .. } => 1,
            _ => 2,
        }
    }
}
