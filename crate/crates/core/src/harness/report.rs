use std::collections::BTreeMap;

use serde::Serialize;

use super::config::{ExperimentConfig, ExperimentId};
use super::prepare::Normalization;
use super::search::Move;

/// Ratio statistics of one `(dim, scale)` cell, pooled over variants.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellStatistics {
    pub dim: usize,
    pub scale: f64,
    pub trials: usize,
    pub skipped: usize,
    /// `None` when every trial of the cell was skipped.
    pub max_ratio: Option<f64>,
    pub mean_ratio: Option<f64>,
    pub q95_ratio: Option<f64>,
    pub lhs_max: Option<f64>,
    /// Largest strong Schatten ratio, where reported.
    pub max_strong_ratio: Option<f64>,
}

/// Per-variant maxima for sweeps with several variants.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VariantStatistics {
    pub variant: String,
    pub dim: usize,
    pub scale: f64,
    pub max_ratio: Option<f64>,
    pub lhs_max: Option<f64>,
    pub max_strong_ratio: Option<f64>,
}

/// What the regressed slope describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SlopeBasis {
    /// `log max LHS` against `log t`; the target is the Hölder exponent.
    LhsVsScale,
    /// `log max ratio` against `log t`; the target is 0 (no trend).
    RatioVsScale,
    /// `log max LHS` at the smallest scale against `log sigma` (or degree).
    LhsVsWeight,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub name: String,
    pub passed: bool,
    pub observed: Option<f64>,
    pub threshold: Option<f64>,
    pub detail: String,
}

impl Verdict {
    pub(crate) fn new(name: impl Into<String>, passed: bool, observed: Option<f64>, threshold: Option<f64>, detail: impl Into<String>) -> Self {
        Verdict { name: name.into(), passed, observed, threshold, detail: detail.into() }
    }
}

/// Generating parameters of the pair attaining a constant estimate: the
/// trial key (which fixes the random substream) plus the accepted search
/// moves applied to the witness parameters.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WitnessRecord {
    pub dim: usize,
    pub scale: f64,
    pub variant: String,
    pub trial: usize,
    pub witness_seed: u64,
    pub moves: Vec<Move>,
}

/// Empirical lower estimate of the constant in a bound.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstantEstimate {
    /// Maximum over all trial ratios and the search trace.
    pub value: f64,
    pub witness: Option<WitnessRecord>,
    /// `(sweep, best ratio)`.
    pub search_trace: Vec<(usize, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SkipSummary {
    pub total: usize,
    pub skipped: usize,
    pub fraction: f64,
    pub by_reason: BTreeMap<String, usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FejerSummary {
    pub degree: usize,
    pub sup_error: f64,
}

/// `(log((b - a)/t + 1) + 1)^2` at one scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IntervalFactor {
    pub scale: f64,
    pub factor: f64,
    /// Largest measured Hölder ratio at this scale.
    pub max_ratio: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub experiment_id: ExperimentId,
    pub description: String,
    /// The configuration with every default filled in.
    pub config: ExperimentConfig,
    pub function: String,
    pub order: u32,
    pub alpha: f64,
    pub normalization: Normalization,
    pub degenerate_witness: bool,
    pub statistics: Vec<CellStatistics>,
    pub series: Vec<VariantStatistics>,
    pub slope_basis: Option<SlopeBasis>,
    pub slope: Option<f64>,
    pub stderr: Option<f64>,
    pub slope_target: Option<f64>,
    pub constant_estimate: ConstantEstimate,
    pub verdicts: Vec<Verdict>,
    pub skips: SkipSummary,
    pub fejer: Option<FejerSummary>,
    pub interval_factors: Vec<IntervalFactor>,
    pub notes: Vec<String>,
    pub passed: bool,
}
