use std::path::{Path, PathBuf};

use oplab_core::harness::{prepare, ExperimentConfig};
use serde::Deserialize;
use sha2::{Digest, Sha256};

use crate::error::{CliError, Result};

/// Top level of a configuration file: an ordered list of
/// `[[experiment]]` tables.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    #[serde(default)]
    experiment: Vec<ExperimentConfig>,
}

/// A parsed configuration file and the digest of the bytes it came from.
#[derive(Debug, Clone)]
pub struct LoadedConfig {
    pub path: PathBuf,
    /// Lowercase hex SHA-256 of the file contents.
    pub digest: String,
    pub experiments: Vec<ExperimentConfig>,
}

/// Reads, parses and validates a configuration file.
pub fn load_config(path: &Path) -> Result<LoadedConfig> {
    let bytes = std::fs::read(path).map_err(|source| CliError::Read { path: path.to_path_buf(), source })?;
    let text = String::from_utf8(bytes.clone()).map_err(|e| CliError::Config {
        path: path.to_path_buf(),
        message: format!("not valid UTF-8: {e}"),
    })?;
    let experiments = parse_config_str(&text, path)?;
    Ok(LoadedConfig { path: path.to_path_buf(), digest: sha256_hex(&bytes), experiments })
}

/// The experiments of a configuration file, validated, in file order.
pub fn parse_config(path: &Path) -> Result<Vec<ExperimentConfig>> {
    load_config(path).map(|c| c.experiments)
}

/// Parses configuration text; `origin` only labels error messages.
///
/// Every experiment is run through the harness preparation step, so
/// parameter errors (an exponent outside the experiment's class, an
/// unsuitable function, ...) surface here with the line of their table.
pub fn parse_config_str(text: &str, origin: &Path) -> Result<Vec<ExperimentConfig>> {
    let file: ConfigFile = toml::from_str(text).map_err(|e| CliError::Config {
        path: origin.to_path_buf(),
        message: e.to_string().trim_end().to_string(),
    })?;
    let headers = table_lines(text);
    for (i, config) in file.experiment.iter().enumerate() {
        if let Err(e) = prepare(config) {
            let line = headers.get(i).map(|l| format!("line {l}: ")).unwrap_or_default();
            return Err(CliError::Config {
                path: origin.to_path_buf(),
                message: format!("{line}experiment #{} ({}): {e}", i + 1, config.experiment_id),
            });
        }
    }
    Ok(file.experiment)
}

/// 1-based line numbers of the `[[experiment]]` headers.
fn table_lines(text: &str) -> Vec<usize> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| {
            let l = l.trim_start();
            l.starts_with("[[") && l[2..].trim_start().starts_with("experiment") && !l.starts_with("[[experiment.")
        })
        .map(|(i, _)| i + 1)
        .collect()
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}
