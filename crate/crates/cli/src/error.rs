use std::path::PathBuf;

/// Failures of the runner itself. Trial-level numeric failures never reach
/// this type: the harness records them as skips.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot read {}: {source}", path.display())]
    Read { path: PathBuf, source: std::io::Error },
    /// Syntax errors, unknown keys and invalid parameters, with the file,
    /// line and key where they were found.
    #[error("{}: {message}", path.display())]
    Config { path: PathBuf, message: String },
    #[error("cannot write {}: {source}", path.display())]
    Write { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Core(#[from] oplab_core::Error),
}

impl CliError {
    /// Process exit status: every runner failure is a usage or
    /// configuration error (2); verdict failures (1) are not errors.
    pub fn exit_code(&self) -> u8 {
        2
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
