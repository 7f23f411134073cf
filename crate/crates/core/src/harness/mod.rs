//! Experiments: sampled operator pairs, normalized ratios, exponent
//! regression, adversarial constant search and aggregated reports.
//!
//! Every trial draws its operators from a substream keyed by
//! `(seed, dim, scale, trial)`, so results do not depend on execution order;
//! trials run on a rayon pool and are aggregated in key order.

mod config;
mod prepare;
mod report;
mod search;
mod stats;
mod witness;

pub use config::{ExperimentConfig, ExperimentId, RankChoice, Tolerances, MIN_SCALE};
pub use prepare::{prepare, Normalization, NormalizationSource, PreparedExperiment, Variant};
pub use report::{
    CellStatistics, ConstantEstimate, ExperimentReport, FejerSummary, IntervalFactor, SkipSummary,
    SlopeBasis, Verdict, VariantStatistics, WitnessRecord,
};
pub use search::{hill_climb, replay, HillClimb, Move, COORDINATES_PER_SWEEP, INITIAL_STEP};
pub use stats::{exponent_regression, quantile, Regression};
pub use witness::{evaluate_witness, sample_witness, Evaluation, TrialKey, Witness};

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::function_space::{FunctionKind, WINDOW_DESCRIPTION};
use crate::linalg::substream;
use stats::{max_of, mean_of};

/// Execution options that never change results.
#[derive(Debug, Clone, Copy, Default)]
pub struct RunOptions {
    /// Worker threads for trials; the global rayon pool when `None`.
    pub jobs: Option<usize>,
}

/// One trial: its key, seed, and either an evaluation or the skip reason.
#[derive(Debug, Clone)]
pub struct TrialOutcome {
    pub key: TrialKey,
    pub witness_seed: u64,
    pub result: std::result::Result<Evaluation, Error>,
}

/// A completed trial in report form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrialResult {
    pub dim: usize,
    pub scale: f64,
    pub variant: usize,
    pub ratio: f64,
    pub lhs_norm: f64,
    pub rhs_value: f64,
    pub witness_seed: u64,
}

impl TrialOutcome {
    pub fn trial_result(&self) -> Option<TrialResult> {
        self.result.as_ref().ok().map(|e| TrialResult {
            dim: self.key.dim,
            scale: self.key.scale,
            variant: self.key.variant,
            ratio: e.ratio,
            lhs_norm: e.lhs,
            rhs_value: e.rhs,
            witness_seed: self.witness_seed,
        })
    }
}

fn skip_reason(e: &Error) -> &'static str {
    match e {
        Error::Domain { .. } => "domain",
        Error::Numeric { message, .. } if message == witness::DEGENERATE => "degenerate_denominator",
        Error::Numeric { .. } => "numeric",
        Error::Input(_) => "input",
        Error::Parameter(_) => "parameter",
    }
}

fn with_pool<T: Send>(jobs: Option<usize>, work: impl FnOnce() -> T + Send) -> Result<T> {
    match jobs {
        None => Ok(work()),
        Some(0) => Err(Error::param("jobs must be at least 1")),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::param(format!("cannot start {n} workers: {e}")))?;
            Ok(pool.install(work))
        }
    }
}

/// All trial keys in aggregation order: dim, scale, trial, variant.
pub fn trial_keys(p: &PreparedExperiment) -> Vec<TrialKey> {
    let mut keys = Vec::new();
    for &dim in &p.config.dims {
        for &scale in &p.scales {
            for trial in 0..p.config.trials_per_dim {
                for variant in 0..p.variants.len() {
                    keys.push(TrialKey { dim, scale, variant, trial });
                }
            }
        }
    }
    keys
}

fn run_one(p: &PreparedExperiment, key: TrialKey) -> TrialOutcome {
    let result = sample_witness(p, key).and_then(|w| evaluate_witness(p, &p.variants[key.variant], &w));
    TrialOutcome { key, witness_seed: key.witness_seed(p.config.seed), result }
}

/// Runs every trial of a prepared experiment; failures become skips.
pub fn run_trials(p: &PreparedExperiment, options: RunOptions) -> Result<Vec<TrialOutcome>> {
    let keys = trial_keys(p);
    with_pool(options.jobs, || keys.par_iter().map(|&k| run_one(p, k)).collect())
}

/// Hill-climbs the witness parameters of the trial `start`.
pub fn adversarial_search(p: &PreparedExperiment, start: TrialKey, steps: usize) -> Result<ConstantEstimate> {
    let variant = &p.variants[start.variant];
    let witness = sample_witness(p, start)?;
    let kind = witness::perturbation_norm(variant);
    let objective = |params: &[f64]| {
        witness
            .with_params(params, kind)
            .and_then(|w| evaluate_witness(p, variant, &w))
            .ok()
            .map(|e| e.ratio)
            .filter(|r| r.is_finite())
    };
    let seed = substream(
        p.config.seed,
        &[start.dim as u64, start.scale.to_bits(), start.trial as u64, start.variant as u64],
    );
    let climb = hill_climb(witness.params(), objective, steps, seed);
    Ok(ConstantEstimate {
        value: climb.value,
        witness: Some(WitnessRecord {
            dim: start.dim,
            scale: start.scale,
            variant: variant.label.clone(),
            trial: start.trial,
            witness_seed: start.witness_seed(p.config.seed),
            moves: climb.moves,
        }),
        search_trace: climb.trace,
    })
}

/// Validates, runs and aggregates one experiment.
pub fn run_experiment(config: &ExperimentConfig, options: RunOptions) -> Result<ExperimentReport> {
    let p = prepare(config)?;
    let outcomes = run_trials(&p, options)?;
    build_report(&p, &outcomes, options)
}

fn opt(values: &[f64], f: impl Fn(&[f64]) -> f64) -> Option<f64> {
    (!values.is_empty()).then(|| f(values))
}

struct Pool {
    ratios: Vec<f64>,
    lhs: Vec<f64>,
    strong: Vec<f64>,
}

impl Pool {
    fn collect<'a>(outcomes: impl Iterator<Item = &'a TrialOutcome>) -> (Self, usize, usize) {
        let mut pool = Pool { ratios: Vec::new(), lhs: Vec::new(), strong: Vec::new() };
        let (mut total, mut skipped) = (0, 0);
        for o in outcomes {
            total += 1;
            match &o.result {
                Ok(e) => {
                    pool.ratios.push(e.ratio);
                    pool.lhs.push(e.lhs);
                    if let Some(s) = e.strong_ratio {
                        pool.strong.push(s);
                    }
                }
                Err(_) => skipped += 1,
            }
        }
        (pool, total, skipped)
    }
}

fn build_report(p: &PreparedExperiment, outcomes: &[TrialOutcome], options: RunOptions) -> Result<ExperimentReport> {
    let id = p.id();
    let cfg = &p.config;
    let tol = p.slope_tol();
    let mut notes = Vec::new();
    let mut verdicts = Vec::new();

    // ---- cell statistics ----
    let mut statistics = Vec::new();
    let mut series = Vec::new();
    for &dim in &cfg.dims {
        for &scale in &p.scales {
            let cell = || outcomes.iter().filter(move |o| o.key.dim == dim && o.key.scale == scale);
            let (pool, total, skipped) = Pool::collect(cell());
            statistics.push(CellStatistics {
                dim,
                scale,
                trials: total,
                skipped,
                max_ratio: opt(&pool.ratios, max_of),
                mean_ratio: opt(&pool.ratios, mean_of),
                q95_ratio: opt(&pool.ratios, |v| quantile(v, 0.95)),
                lhs_max: opt(&pool.lhs, max_of),
                max_strong_ratio: opt(&pool.strong, max_of),
            });
            if p.variants.len() > 1 {
                for (vi, v) in p.variants.iter().enumerate() {
                    let (vp, _, _) = Pool::collect(cell().filter(|o| o.key.variant == vi));
                    series.push(VariantStatistics {
                        variant: v.label.clone(),
                        dim,
                        scale,
                        max_ratio: opt(&vp.ratios, max_of),
                        lhs_max: opt(&vp.lhs, max_of),
                        max_strong_ratio: opt(&vp.strong, max_of),
                    });
                }
            }
        }
    }

    // ---- skips ----
    let mut by_reason = BTreeMap::new();
    for o in outcomes {
        if let Err(e) = &o.result {
            *by_reason.entry(skip_reason(e).to_string()).or_insert(0) += 1;
            log::debug!("{id}: skipped trial {:?}: {e}", o.key);
        }
    }
    let skipped: usize = by_reason.values().sum();
    let total = outcomes.len();
    let fraction = if total > 0 { skipped as f64 / total as f64 } else { 0.0 };
    let skips = SkipSummary { total, skipped, fraction, by_reason };

    // ---- slope ----
    let max_at_scale = |scale: f64, field: fn(&Evaluation) -> f64| {
        let v: Vec<f64> = outcomes
            .iter()
            .filter(|o| o.key.scale == scale)
            .filter_map(|o| o.result.as_ref().ok().map(field))
            .collect();
        max_of(&v)
    };
    let (basis, target) = match id {
        ExperimentId::SelfadjointHolder
        | ExperimentId::UnitaryHolder
        | ExperimentId::UnitaryHigher
        | ExperimentId::Contraction
        | ExperimentId::SelfadjointHigher => (Some(SlopeBasis::LhsVsScale), Some(p.alpha)),
        ExperimentId::Zygmund | ExperimentId::UnitaryLipschitzLog | ExperimentId::Omega => {
            (Some(SlopeBasis::RatioVsScale), Some(0.0))
        }
        ExperimentId::Bernstein => (Some(SlopeBasis::LhsVsWeight), Some(1.0)),
        _ => (None, None),
    };
    let points: Vec<(f64, f64)> = match basis {
        Some(SlopeBasis::LhsVsScale) => p.scales.iter().map(|&s| (s, max_at_scale(s, |e| e.lhs))).collect(),
        Some(SlopeBasis::RatioVsScale) => p.scales.iter().map(|&s| (s, max_at_scale(s, |e| e.ratio))).collect(),
        Some(SlopeBasis::LhsVsWeight) => {
            let smallest = *p.scales.last().expect("scales are nonempty");
            p.variants
                .iter()
                .enumerate()
                .map(|(vi, v)| {
                    let lhs: Vec<f64> = outcomes
                        .iter()
                        .filter(|o| o.key.variant == vi && o.key.scale == smallest)
                        .filter_map(|o| o.result.as_ref().ok().map(|e| e.lhs))
                        .collect();
                    (v.weight, max_of(&lhs))
                })
                .collect()
        }
        None => Vec::new(),
    };
    let regression = if basis.is_some() {
        match exponent_regression(&points) {
            Ok(r) => Some(r),
            Err(e) => {
                notes.push(format!("slope unavailable: {e}"));
                None
            }
        }
    } else {
        None
    };

    if let (Some(basis), Some(target)) = (basis, target) {
        if p.degenerate {
            notes.push(format!(
                "{} is smooth: degenerate witness, slope verdict skipped",
                p.function.name()
            ));
        } else {
            let slope = regression.map(|r| r.slope);
            let (name, passed, detail) = match (id, slope) {
                (_, None) => ("slope", false, "regression unavailable".to_string()),
                (ExperimentId::Omega, Some(s)) => (
                    "boundedness",
                    s >= -tol,
                    format!("ratio trend slope {s:.4} >= -{tol} (no growth as t -> 0)"),
                ),
                (_, Some(s)) => {
                    let name = match basis {
                        SlopeBasis::RatioVsScale => "flatness",
                        SlopeBasis::LhsVsWeight => "weight_slope",
                        SlopeBasis::LhsVsScale => "slope",
                    };
                    (name, (s - target).abs() <= tol, format!("|{s:.4} - {target}| <= {tol}"))
                }
            };
            verdicts.push(Verdict::new(name, passed, slope, Some(tol), detail));
        }
    }

    // ---- growth across dims ----
    let growth_tol = cfg.tolerances.growth_tol;
    let max_at_dim = |dim: usize, variant: Option<usize>| {
        let v: Vec<f64> = outcomes
            .iter()
            .filter(|o| o.key.dim == dim && variant.is_none_or(|vi| o.key.variant == vi))
            .filter_map(|o| o.result.as_ref().ok().map(|e| e.ratio))
            .collect();
        max_of(&v)
    };
    let growth_verdict = |name: String, variant: Option<usize>| {
        let lo = *cfg.dims.iter().min().expect("dims are nonempty");
        let hi = *cfg.dims.iter().max().expect("dims are nonempty");
        let (a, b) = (max_at_dim(lo, variant), max_at_dim(hi, variant));
        let passed = b <= growth_tol * a || (a == 0.0 && b == 0.0);
        let observed = if a > 0.0 { Some(b / a) } else { None };
        Verdict::new(name, passed, observed, Some(growth_tol), format!("max ratio dim {hi}: {b:.6e}, dim {lo}: {a:.6e}"))
    };
    match id {
        ExperimentId::FarforovskayaCompare => {}
        ExperimentId::Schatten | ExperimentId::SchattenHigher => {
            if cfg.dims.len() > 1 {
                for (vi, v) in p.variants.iter().enumerate() {
                    verdicts.push(growth_verdict(format!("growth[{}]", v.label), Some(vi)));
                }
            }
            let violations = outcomes
                .iter()
                .filter(|o| matches!(&o.result, Ok(e) if e.weak_le_strong == Some(false)))
                .count();
            verdicts.push(Verdict::new(
                "weak_le_strong",
                violations == 0,
                Some(violations as f64),
                Some(0.0),
                "weak Schatten norm <= strong norm on every trial",
            ));
        }
        _ => {
            if cfg.dims.len() > 1 {
                verdicts.push(growth_verdict("growth".into(), None));
            }
        }
    }

    // ---- cross-check ----
    if id == ExperimentId::SelfadjointHolder {
        let worst = outcomes
            .iter()
            .filter_map(|o| o.result.as_ref().ok().and_then(|e| e.doi_rel_error))
            .fold(0.0, f64::max);
        let t = cfg.tolerances.doi_rel_tol;
        verdicts.push(Verdict::new(
            "doi_cross_check",
            worst <= t,
            Some(worst),
            Some(t),
            "Schur-multiplier difference vs direct difference, relative Frobenius gap",
        ));
    }

    // ---- interval comparison ----
    let mut interval_factors = Vec::new();
    if id == ExperimentId::FarforovskayaCompare {
        let (a, b) = cfg.interval;
        for &s in &p.scales {
            let cell: Vec<f64> = outcomes
                .iter()
                .filter(|o| o.key.scale == s)
                .filter_map(|o| o.result.as_ref().ok().map(|e| e.ratio))
                .collect();
            interval_factors.push(IntervalFactor {
                scale: s,
                factor: (((b - a) / s + 1.0).ln() + 1.0).powi(2),
                max_ratio: opt(&cell, max_of),
            });
        }
        verdicts.push(Verdict::new(
            "informational",
            true,
            None,
            None,
            "the interval bound's log^2 factor grows as t -> 0 while measured ratios stay bounded",
        ));
    } else {
        let max_skip = cfg.tolerances.max_skip_fraction;
        verdicts.push(Verdict::new(
            "skips",
            fraction <= max_skip,
            Some(fraction),
            Some(max_skip),
            format!("{skipped} of {total} trials skipped"),
        ));
    }

    // ---- constant estimate ----
    let best = outcomes
        .iter()
        .filter_map(|o| o.result.as_ref().ok().map(|e| (o.key, e.ratio)))
        .fold(None::<(TrialKey, f64)>, |acc, (k, r)| match acc {
            Some((_, br)) if br >= r => acc,
            _ => Some((k, r)),
        });
    let constant_estimate = match best {
        None => ConstantEstimate { value: 0.0, witness: None, search_trace: vec![(0, 0.0)] },
        Some((key, ratio)) => {
            let mut est = with_pool(options.jobs, || adversarial_search(p, key, cfg.adversarial_steps))??;
            est.value = est
                .search_trace
                .iter()
                .map(|&(_, v)| v)
                .fold(ratio, f64::max);
            est
        }
    };

    let fejer = p.fejer.as_ref().map(|f| FejerSummary { degree: f.degree, sup_error: f.sup_error });
    if id == ExperimentId::Contraction {
        notes.push(format!("contraction mode: {:?}", cfg.mode).to_lowercase());
    }
    if p.function.kind == FunctionKind::Xlogx {
        notes.push(format!("x log|x| cutoff: {WINDOW_DESCRIPTION}"));
    }
    if let Some(w) = &p.modulus {
        notes.push(format!(
            "Lambda_omega seminorm for omega(t) = {}: sup |f(z) - f(w)| / omega(|z - w|) over a grid",
            w.name
        ));
    }

    let passed = verdicts.iter().all(|v| v.passed);
    Ok(ExperimentReport {
        experiment_id: id,
        description: id.description().to_string(),
        config: cfg.clone(),
        function: match id {
            ExperimentId::Bernstein => p.variants.iter().map(|v| v.function.as_ref().map(|f| f.name()).unwrap_or_default()).collect::<Vec<_>>().join(", "),
            _ => p.function.name(),
        },
        order: p.order,
        alpha: p.alpha,
        normalization: p.normalization,
        degenerate_witness: p.degenerate,
        statistics,
        series,
        slope_basis: basis,
        slope: regression.map(|r| r.slope),
        stderr: regression.map(|r| r.stderr),
        slope_target: target,
        constant_estimate,
        verdicts,
        skips,
        fejer,
        interval_factors,
        notes,
        passed,
    })
}
