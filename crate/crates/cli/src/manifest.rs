use chrono::{SecondsFormat, Utc};
use oplab_core::harness::{run_experiment, ExperimentConfig, ExperimentReport, RunOptions};
use serde::Serialize;

use crate::error::Result;

/// Everything one invocation produced.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub version: String,
    /// SHA-256 of the configuration file that was executed.
    pub config_digest: String,
    /// Command-line seed override applied to every experiment, if any;
    /// the effective per-experiment seeds are in `configs`.
    pub seed: Option<u64>,
    pub started_at: String,
    pub finished_at: String,
    /// The configurations as executed, defaults filled in.
    pub configs: Vec<ExperimentConfig>,
    pub reports: Vec<ExperimentReport>,
}

impl RunManifest {
    /// Whether every verdict of every report passed (skip fractions are
    /// verdicts too).
    pub fn passed(&self) -> bool {
        self.reports.iter().all(|r| r.passed)
    }

    /// Process exit status: 0 when everything passed, 1 otherwise.
    pub fn exit_code(&self) -> u8 {
        if self.passed() {
            0
        } else {
            1
        }
    }
}

fn now() -> String {
    Utc::now().to_rfc3339_opts(SecondsFormat::Millis, true)
}

/// Runs the experiments one after another; trials inside an experiment
/// use `options.jobs` workers without affecting results.
pub fn run(
    mut configs: Vec<ExperimentConfig>,
    config_digest: &str,
    seed: Option<u64>,
    options: RunOptions,
) -> Result<RunManifest> {
    if let Some(s) = seed {
        for c in &mut configs {
            c.seed = s;
        }
    }
    let started_at = now();
    let mut reports = Vec::with_capacity(configs.len());
    for (i, config) in configs.iter().enumerate() {
        log::info!("[{}/{}] {}", i + 1, configs.len(), config.experiment_id);
        let report = run_experiment(config, options)?;
        log::info!(
            "{}: {} ({} of {} trials skipped)",
            config.experiment_id,
            if report.passed { "pass" } else { "FAIL" },
            report.skips.skipped,
            report.skips.total
        );
        reports.push(report);
    }
    Ok(RunManifest {
        version: env!("CARGO_PKG_VERSION").to_string(),
        config_digest: config_digest.to_string(),
        seed,
        started_at,
        finished_at: now(),
        configs: reports.iter().map(|r| r.config.clone()).collect(),
        reports,
    })
}
