//! Configuration parsing, experiment dispatch and report emission for the
//! `oplab` runner.

pub mod config;
pub mod emit;
pub mod error;
pub mod manifest;

pub use config::{load_config, parse_config, parse_config_str, LoadedConfig};
pub use emit::{emit, report_body, to_csv, to_json, Format};
pub use error::{CliError, Result};
pub use manifest::{run, RunManifest};
