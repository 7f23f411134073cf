use std::fmt;

use serde::{Deserialize, Serialize};

use crate::calculus::ContractionMode;
use crate::error::{Error, Result};
use crate::function_space::{Domain, FunctionKind, ModulusChoice};

/// The experiments the harness can run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentId {
    SelfadjointHolder,
    Zygmund,
    Bernstein,
    UnitaryHolder,
    UnitaryLipschitzLog,
    UnitaryHigher,
    Omega,
    Contraction,
    SelfadjointHigher,
    Schatten,
    SchattenHigher,
    FarforovskayaCompare,
}

impl ExperimentId {
    pub const ALL: [ExperimentId; 12] = [
        ExperimentId::SelfadjointHolder,
        ExperimentId::Zygmund,
        ExperimentId::Bernstein,
        ExperimentId::UnitaryHolder,
        ExperimentId::UnitaryLipschitzLog,
        ExperimentId::UnitaryHigher,
        ExperimentId::Omega,
        ExperimentId::Contraction,
        ExperimentId::SelfadjointHigher,
        ExperimentId::Schatten,
        ExperimentId::SchattenHigher,
        ExperimentId::FarforovskayaCompare,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            ExperimentId::SelfadjointHolder => "selfadjoint_holder",
            ExperimentId::Zygmund => "zygmund",
            ExperimentId::Bernstein => "bernstein",
            ExperimentId::UnitaryHolder => "unitary_holder",
            ExperimentId::UnitaryLipschitzLog => "unitary_lipschitz_log",
            ExperimentId::UnitaryHigher => "unitary_higher",
            ExperimentId::Omega => "omega",
            ExperimentId::Contraction => "contraction",
            ExperimentId::SelfadjointHigher => "selfadjoint_higher",
            ExperimentId::Schatten => "schatten",
            ExperimentId::SchattenHigher => "schatten_higher",
            ExperimentId::FarforovskayaCompare => "farforovskaya_compare",
        }
    }

    pub fn description(&self) -> &'static str {
        match self {
            ExperimentId::SelfadjointHolder => "||f(A)-f(B)|| / (|f|_alpha ||A-B||^alpha), 0 < alpha < 1",
            ExperimentId::Zygmund => "||f(A+K)-2f(A)+f(A-K)|| / (|f|_Z ||K||)",
            ExperimentId::Bernstein => "||f(A)-f(B)|| / (sigma ||f||_inf ||A-B||) for sin(sigma x); circle: degree-d monomials",
            ExperimentId::UnitaryHolder => "||f(U)-f(V)|| / (|f|_alpha ||U-V||^alpha) on unitaries",
            ExperimentId::UnitaryLipschitzLog => "||f(U)-f(V)|| / (|f|_Z (2+log2(1/||U-V||)) ||U-V||)",
            ExperimentId::UnitaryHigher => "||sum (-1)^(n-k) C(n,k) f(e^{ikA}U)|| / (|f|_alpha ||A||^alpha)",
            ExperimentId::Omega => "||f(U)-f(V)|| / (|f|_omega omega*(||U-V||))",
            ExperimentId::Contraction => "||sum (-1)^(n-k) C(n,k) f(X_k)|| / (|f|_alpha ||T-R||^alpha) on contractions",
            ExperimentId::SelfadjointHigher => "||Delta_K^n f(A)|| / (|f|_alpha ||K||^alpha)",
            ExperimentId::Schatten => "||f(A)-f(B)||_{S_{p/alpha}(,inf)} / (|f|_alpha ||A-B||_{S_p}^alpha)",
            ExperimentId::SchattenHigher => "||Delta_K^n f(A)||_{S_{p/alpha}(,inf)} / (|f|_alpha ||K||_{S_p}^alpha)",
            ExperimentId::FarforovskayaCompare => "log^2 factor of the interval bound against the Holder bound (informational)",
        }
    }

    pub(crate) fn default_function(&self, alpha: Option<f64>) -> FunctionKind {
        use ExperimentId::*;
        match self {
            SelfadjointHolder | Schatten | FarforovskayaCompare => {
                FunctionKind::PowerAlpha { alpha: alpha.unwrap_or(0.5) }
            }
            Zygmund | SelfadjointHigher | SchattenHigher => match alpha {
                Some(a) if a != 1.0 => FunctionKind::PowerAlpha { alpha: a },
                _ => FunctionKind::Xlogx,
            },
            Bernstein => FunctionKind::SinSigma { sigma: 1.0 },
            UnitaryHolder | Omega | Contraction => {
                FunctionKind::Lacunary { alpha: alpha.unwrap_or(0.5), levels: 8 }
            }
            UnitaryLipschitzLog => FunctionKind::Lacunary { alpha: 1.0, levels: 16 },
            UnitaryHigher => FunctionKind::Lacunary { alpha: alpha.unwrap_or(1.5), levels: 8 },
        }
    }

    /// Default difference order `n`.
    pub(crate) fn default_order(&self) -> Option<u32> {
        match self {
            ExperimentId::Zygmund | ExperimentId::UnitaryLipschitzLog => Some(2),
            ExperimentId::SelfadjointHolder
            | ExperimentId::UnitaryHolder
            | ExperimentId::Omega
            | ExperimentId::Schatten
            | ExperimentId::FarforovskayaCompare
            | ExperimentId::Bernstein => Some(1),
            ExperimentId::UnitaryHigher
            | ExperimentId::SelfadjointHigher
            | ExperimentId::SchattenHigher
            | ExperimentId::Contraction => None,
        }
    }

    /// Truncated lacunary witnesses are smooth below about `2^-levels`; their
    /// experiments default to the scales where the series is still rough.
    /// Contraction pairs sit at radius `1 - t`, which damps the top levels,
    /// so the band there starts smaller and reaches one octave further.
    pub fn default_scales(&self) -> Vec<f64> {
        let (lo, hi) = match self {
            ExperimentId::UnitaryHolder | ExperimentId::Omega => (1, 7),
            ExperimentId::UnitaryHigher => (2, 7),
            ExperimentId::Contraction => (3, 9),
            _ => (4, 14),
        };
        (lo..=hi).map(|k| 2f64.powi(-k)).collect()
    }

    fn default_slope_tol(&self, order: u32) -> f64 {
        match self {
            ExperimentId::UnitaryHolder
            | ExperimentId::UnitaryHigher
            | ExperimentId::Contraction
            | ExperimentId::Bernstein => 0.1,
            _ if order > 1 && !matches!(self, ExperimentId::Zygmund | ExperimentId::UnitaryLipschitzLog) => 0.1,
            _ => 0.05,
        }
    }
}

impl fmt::Display for ExperimentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Prescribed rank of a Schatten-class perturbation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RankChoice {
    One,
    Half,
    Full,
}

impl RankChoice {
    pub fn rank(&self, dim: usize) -> usize {
        match self {
            RankChoice::One => 1,
            RankChoice::Half => (dim / 2).max(1),
            RankChoice::Full => dim,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            RankChoice::One => "one",
            RankChoice::Half => "half",
            RankChoice::Full => "full",
        }
    }
}

/// Verdict thresholds. Unset slope tolerances take the experiment default:
/// 0.1 for higher-order, circle lacunary and Bernstein sweeps, 0.05 otherwise.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    pub slope_tol: Option<f64>,
    pub growth_tol: f64,
    pub max_skip_fraction: f64,
    pub doi_rel_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            slope_tol: None,
            growth_tol: 1.25,
            max_skip_fraction: 0.05,
            doi_rel_tol: 1e-9,
        }
    }
}

fn default_dims() -> Vec<usize> {
    vec![8, 16, 32]
}
fn default_trials() -> usize {
    50
}
fn default_seed() -> u64 {
    1
}
fn default_sigmas() -> Vec<f64> {
    vec![1.0, 2.0, 4.0, 8.0]
}
fn default_degrees() -> Vec<u32> {
    vec![1, 2, 4, 8]
}
fn default_ranks() -> Vec<RankChoice> {
    vec![RankChoice::One, RankChoice::Half, RankChoice::Full]
}
fn default_adversarial_steps() -> usize {
    10
}
fn default_spread() -> f64 {
    1.0
}
fn default_interval() -> (f64, f64) {
    (-1.0, 1.0)
}
fn default_fejer_degree() -> usize {
    4096
}

/// Declarative description of one experiment run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment_id: ExperimentId,
    #[serde(default = "default_dims")]
    pub dims: Vec<usize>,
    #[serde(default = "default_trials")]
    pub trials_per_dim: usize,
    #[serde(default = "default_seed")]
    pub seed: u64,
    /// Test function; the experiment default when absent.
    #[serde(default)]
    pub function: Option<FunctionKind>,
    /// Hölder exponent `alpha`; defaults to the function's class exponent.
    #[serde(default)]
    pub alpha: Option<f64>,
    /// Difference order `n`; defaults to the function's class order.
    #[serde(default)]
    pub order: Option<u32>,
    /// Schatten indices; defaults to `[1, 2]`, or `[n, n + 1]` for higher order.
    #[serde(default)]
    pub p_values: Option<Vec<f64>>,
    #[serde(default = "default_sigmas")]
    pub sigmas: Vec<f64>,
    /// Circle Bernstein degrees; used when `bernstein_domain = "circle"`.
    #[serde(default = "default_degrees")]
    pub degrees: Vec<u32>,
    #[serde(default)]
    pub bernstein_domain: Option<Domain>,
    #[serde(default = "default_ranks")]
    pub ranks: Vec<RankChoice>,
    /// Perturbation sizes `t`, positive and strictly decreasing.
    #[serde(default)]
    pub scales: Option<Vec<f64>>,
    #[serde(default = "default_adversarial_steps")]
    pub adversarial_steps: usize,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub mode: ContractionMode,
    /// Operator norm of the base operator in units of the perturbation size.
    #[serde(default = "default_spread")]
    pub spread: f64,
    /// Spectral interval `[a, b]` for the interval-bound comparison.
    #[serde(default = "default_interval")]
    pub interval: (f64, f64),
    #[serde(default)]
    pub modulus: Option<ModulusChoice>,
    #[serde(default = "default_fejer_degree")]
    pub fejer_degree: usize,
}

/// Smallest admissible perturbation size.
pub const MIN_SCALE: f64 = 1.0 / 16384.0;

impl ExperimentConfig {
    pub fn new(experiment_id: ExperimentId) -> Self {
        ExperimentConfig {
            experiment_id,
            dims: default_dims(),
            trials_per_dim: default_trials(),
            seed: default_seed(),
            function: None,
            alpha: None,
            order: None,
            p_values: None,
            sigmas: default_sigmas(),
            degrees: default_degrees(),
            bernstein_domain: None,
            ranks: default_ranks(),
            scales: None,
            adversarial_steps: default_adversarial_steps(),
            tolerances: Tolerances::default(),
            mode: ContractionMode::default(),
            spread: default_spread(),
            interval: default_interval(),
            modulus: None,
            fejer_degree: default_fejer_degree(),
        }
    }

    pub fn scales(&self) -> Vec<f64> {
        self.scales.clone().unwrap_or_else(|| self.experiment_id.default_scales())
    }

    pub fn slope_tol(&self, order: u32) -> f64 {
        self.tolerances
            .slope_tol
            .unwrap_or_else(|| self.experiment_id.default_slope_tol(order))
    }

    pub fn modulus_choice(&self) -> ModulusChoice {
        self.modulus.unwrap_or(ModulusChoice::Power { alpha: 0.5 })
    }

    pub fn bernstein_domain(&self) -> Domain {
        self.bernstein_domain.unwrap_or(Domain::Line)
    }

    /// Checks the plumbing-level invariants. Function-dependent checks run
    /// when the experiment is prepared.
    pub fn validate(&self) -> Result<()> {
        if self.dims.is_empty() || self.dims.contains(&0) {
            return Err(Error::param("dims must be a nonempty list of positive integers"));
        }
        if self.trials_per_dim == 0 {
            return Err(Error::param("trials_per_dim must be at least 1"));
        }
        let scales = self.scales();
        if scales.is_empty() {
            return Err(Error::param("scales must be nonempty"));
        }
        if scales.iter().any(|s| !(s.is_finite() && *s > 0.0)) {
            return Err(Error::param("scales must be positive and finite"));
        }
        if scales.windows(2).any(|w| w[1] >= w[0]) {
            return Err(Error::param("scales must be strictly decreasing"));
        }
        if let Some(&s) = scales.iter().find(|&&s| s < MIN_SCALE) {
            return Err(Error::param(format!(
                "scale {s:e} is below the smallest admissible scale 2^-14"
            )));
        }
        if !(self.spread > 0.0 && self.spread.is_finite()) {
            return Err(Error::param("spread must be positive"));
        }
        let t = &self.tolerances;
        if let Some(s) = t.slope_tol {
            if !(s > 0.0) {
                return Err(Error::param("slope_tol must be positive"));
            }
        }
        if !(t.growth_tol >= 1.0) {
            return Err(Error::param("growth_tol must be at least 1"));
        }
        if !(0.0..=1.0).contains(&t.max_skip_fraction) {
            return Err(Error::param("max_skip_fraction must lie in [0, 1]"));
        }
        if !(t.doi_rel_tol > 0.0) {
            return Err(Error::param("doi_rel_tol must be positive"));
        }
        if let Some(n) = self.order {
            if n == 0 {
                return Err(Error::param("order must be at least 1"));
            }
        }
        if let Some(a) = self.alpha {
            if !(a > 0.0 && a.is_finite()) {
                return Err(Error::param(format!("alpha must be positive (got {a})")));
            }
        }
        if self.experiment_id == ExperimentId::Bernstein {
            if self.function.is_some() {
                return Err(Error::param(
                    "bernstein sweeps its own function family; remove `function`",
                ));
            }
            match self.bernstein_domain() {
                Domain::Line => {
                    if self.sigmas.len() < 2 || self.sigmas.iter().any(|s| !(*s > 0.0 && s.is_finite())) {
                        return Err(Error::param("bernstein needs at least two positive sigmas"));
                    }
                }
                Domain::Circle => {
                    if self.degrees.len() < 2 || self.degrees.contains(&0) {
                        return Err(Error::param("bernstein needs at least two positive degrees"));
                    }
                }
            }
        }
        if matches!(self.experiment_id, ExperimentId::Schatten | ExperimentId::SchattenHigher) {
            if self.ranks.is_empty() {
                return Err(Error::param("ranks must be nonempty"));
            }
            if let Some(ps) = &self.p_values {
                if ps.is_empty() {
                    return Err(Error::param("p_values must be nonempty"));
                }
            }
        }
        if self.experiment_id == ExperimentId::FarforovskayaCompare {
            let (a, b) = self.interval;
            if !(a < b && a.is_finite() && b.is_finite()) {
                return Err(Error::param("interval must satisfy a < b"));
            }
        }
        if self.experiment_id == ExperimentId::Contraction && self.fejer_degree == 0 {
            return Err(Error::param("fejer_degree must be positive"));
        }
        Ok(())
    }
}
