use num_complex::Complex64;
use serde::Serialize;

use super::config::{ExperimentConfig, ExperimentId, RankChoice};
use crate::calculus::{fejer_truncation, FejerPolynomial};
use crate::error::{Error, Result};
use crate::function_space::{
    lambda_omega_estimate, seminorm_estimate, sin_sigma, sup_norm_estimate, trig_monomial,
    validate_modulus, Domain, FunctionKind, FunctionSpec, Modulus, SeminormGrid,
};

/// Where the seminorm in the ratio denominators came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NormalizationSource {
    /// Closed-form seminorm carried by the catalog entry.
    Declared,
    /// Grid estimate of the difference seminorm (spacing `1e-4`).
    GridEstimate,
    /// The grid seminorm vanished; seminorm plus sup norm was used.
    SeminormPlusSup,
    /// Both vanished; the ratio is left unnormalized.
    Unit,
    /// Grid estimate of the `Lambda_omega` seminorm.
    LambdaOmegaEstimate,
    /// `sup |f|` times the exponential type or degree (Bernstein sweeps).
    SupNormTimesType,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Normalization {
    pub source: NormalizationSource,
    pub value: f64,
}

/// One sweep variant within an experiment: a Bernstein exponential type or
/// degree, or a Schatten `(p, rank)` pair.
#[derive(Debug, Clone)]
pub struct Variant {
    pub label: String,
    /// Function evaluated in this variant (Bernstein sweeps).
    pub function: Option<FunctionSpec>,
    /// Exponential type `sigma` or degree `d` (Bernstein sweeps).
    pub weight: f64,
    /// `weight * sup |f|`.
    pub bound_factor: f64,
    pub p: Option<f64>,
    pub rank: Option<RankChoice>,
    /// Whether the strong `S_{p/alpha}` ratio is reported for this variant.
    pub strong: bool,
}

impl Variant {
    fn plain() -> Self {
        Variant {
            label: String::new(),
            function: None,
            weight: 1.0,
            bound_factor: 1.0,
            p: None,
            rank: None,
            strong: false,
        }
    }
}

/// A validated experiment with its function, normalization and variants
/// resolved.
#[derive(Debug, Clone)]
pub struct PreparedExperiment {
    pub config: ExperimentConfig,
    pub function: FunctionSpec,
    pub order: u32,
    pub alpha: f64,
    pub normalization: Normalization,
    pub variants: Vec<Variant>,
    pub scales: Vec<f64>,
    pub modulus: Option<Modulus>,
    /// Fejér mean used as the polynomial for contraction experiments.
    pub fejer: Option<FejerPolynomial>,
    /// Smooth functions (polynomials, trigonometric polynomials, `sin`)
    /// cannot exhibit a Hölder exponent; slope verdicts are skipped.
    pub degenerate: bool,
}

impl PreparedExperiment {
    pub fn id(&self) -> ExperimentId {
        self.config.experiment_id
    }

    pub fn slope_tol(&self) -> f64 {
        self.config.slope_tol(self.order)
    }

    pub(crate) fn polynomial(&self) -> &[Complex64] {
        self.fejer.as_ref().map(|p| p.coefficients.as_slice()).unwrap_or(&[])
    }
}

fn modulus_grid() -> Vec<f64> {
    (0..=400).map(|i| i as f64 * 0.01).collect()
}

/// Validates a configuration and resolves everything the trials need.
pub fn prepare(config: &ExperimentConfig) -> Result<PreparedExperiment> {
    config.validate()?;
    let id = config.experiment_id;
    let mut config = config.clone();
    config.scales = Some(config.scales());

    if id == ExperimentId::Bernstein {
        return prepare_bernstein(config);
    }

    let kind = config.function.clone().unwrap_or_else(|| id.default_function(config.alpha));
    let base = kind.build()?;
    let domain = match id {
        ExperimentId::UnitaryHolder
        | ExperimentId::UnitaryLipschitzLog
        | ExperimentId::UnitaryHigher
        | ExperimentId::Omega
        | ExperimentId::Contraction => Domain::Circle,
        _ => Domain::Line,
    };
    if base.domain != domain {
        return Err(Error::param(format!(
            "{id} needs a {domain:?} function, got {}",
            base.name()
        )));
    }
    config.function = Some(kind);

    let order = config.order.or(id.default_order()).unwrap_or(base.class_order);
    let alpha = config.alpha.unwrap_or(base.class_exponent);
    check_experiment_class(id, order, alpha)?;

    if let Some(d) = polynomial_degree(&base) {
        if d >= order as usize {
            return Err(Error::param(format!(
                "{} has degree {d} >= n = {order}: its order-{order} difference seminorm \
                 vanishes identically on the line while the operator differences do not, \
                 so it is not a witness for {id}",
                base.name()
            )));
        }
    }

    let class_matches = base.class_order == order && base.class_exponent == alpha;
    let function = if id == ExperimentId::Omega { base.clone() } else { base.clone().with_class(order, alpha)? };
    config.order = Some(order);
    config.alpha = Some(alpha);

    let mut modulus = None;
    let normalization = if id == ExperimentId::Omega {
        let choice = config.modulus_choice();
        config.modulus = Some(choice);
        let w = choice.build()?;
        let report = validate_modulus(&w, &modulus_grid());
        if !report.is_accepted() {
            return Err(Error::param(format!("{} is not a modulus of continuity: {report:?}", w.name)));
        }
        let grid = SeminormGrid::default_for(&function);
        let value = lambda_omega_estimate(&function, &w, &grid)?;
        modulus = Some(w);
        fallback(value, NormalizationSource::LambdaOmegaEstimate, &function, &grid)
    } else {
        normalization_for(&function, class_matches)?
    };

    let mut fejer = None;
    if id == ExperimentId::Contraction {
        fejer = Some(fejer_truncation(&function, config.fejer_degree)?);
    }

    let variants = if matches!(id, ExperimentId::Schatten | ExperimentId::SchattenHigher) {
        schatten_variants(&mut config, order)?
    } else {
        vec![Variant::plain()]
    };

    Ok(PreparedExperiment {
        scales: config.scales(),
        degenerate: function.smooth,
        config,
        function,
        order,
        alpha,
        normalization,
        variants,
        modulus,
        fejer,
    })
}

fn polynomial_degree(f: &FunctionSpec) -> Option<usize> {
    match f.kind {
        FunctionKind::Polynomial { .. } => f.degree(),
        _ => None,
    }
}

fn check_experiment_class(id: ExperimentId, order: u32, alpha: f64) -> Result<()> {
    use ExperimentId::*;
    match id {
        SelfadjointHolder | UnitaryHolder | Schatten | FarforovskayaCompare => {
            if !(alpha > 0.0 && alpha < 1.0) || order != 1 {
                return Err(Error::param(format!(
                    "{id} requires n = 1 and 0 < alpha < 1 (got n = {order}, alpha = {alpha})"
                )));
            }
        }
        Zygmund | UnitaryLipschitzLog => {
            if order != 2 || alpha != 1.0 {
                return Err(Error::param(format!(
                    "{id} requires the Zygmund class n = 2, alpha = 1 (got n = {order}, alpha = {alpha})"
                )));
            }
        }
        UnitaryHigher | SelfadjointHigher | SchattenHigher | Contraction => {
            if !((order - 1) as f64 <= alpha && alpha < order as f64 && alpha > 0.0) {
                return Err(Error::param(format!(
                    "{id} requires n - 1 <= alpha < n (got n = {order}, alpha = {alpha})"
                )));
            }
        }
        Omega | Bernstein => {}
    }
    Ok(())
}

fn normalization_for(f: &FunctionSpec, class_matches: bool) -> Result<Normalization> {
    if class_matches {
        if let Some(v) = f.declared_seminorm {
            return Ok(Normalization { source: NormalizationSource::Declared, value: v });
        }
    }
    let grid = SeminormGrid::default_for(f);
    let value = seminorm_estimate(f, &grid)?;
    Ok(fallback(value, NormalizationSource::GridEstimate, f, &grid))
}

fn fallback(value: f64, source: NormalizationSource, f: &FunctionSpec, grid: &SeminormGrid) -> Normalization {
    if value > 1e-14 {
        return Normalization { source, value };
    }
    let sup = sup_norm_estimate(f, grid);
    if value + sup > 1e-14 {
        Normalization { source: NormalizationSource::SeminormPlusSup, value: value + sup }
    } else {
        Normalization { source: NormalizationSource::Unit, value: 1.0 }
    }
}

fn prepare_bernstein(mut config: ExperimentConfig) -> Result<PreparedExperiment> {
    let domain = config.bernstein_domain();
    config.bernstein_domain = Some(domain);
    let variants: Vec<Variant> = match domain {
        Domain::Line => config
            .sigmas
            .iter()
            .map(|&sigma| {
                let f = sin_sigma(sigma)?;
                let sup = f.sup_norm_hint.unwrap_or(1.0);
                Ok(Variant {
                    label: format!("sigma={sigma}"),
                    function: Some(f),
                    weight: sigma,
                    bound_factor: sigma * sup,
                    ..Variant::plain()
                })
            })
            .collect::<Result<_>>()?,
        Domain::Circle => config
            .degrees
            .iter()
            .map(|&d| {
                let f = trig_monomial(d as i64);
                let sup = f.sup_norm_hint.unwrap_or(1.0);
                Variant {
                    label: format!("degree={d}"),
                    function: Some(f),
                    weight: d as f64,
                    bound_factor: d as f64 * sup,
                    ..Variant::plain()
                }
            })
            .collect(),
    };
    let function = variants[0].function.clone().expect("bernstein variants carry functions");
    config.order = Some(1);
    Ok(PreparedExperiment {
        scales: config.scales(),
        config,
        function,
        order: 1,
        alpha: 1.0,
        normalization: Normalization { source: NormalizationSource::SupNormTimesType, value: 1.0 },
        variants,
        modulus: None,
        fejer: None,
        degenerate: false,
    })
}

fn schatten_variants(config: &mut ExperimentConfig, order: u32) -> Result<Vec<Variant>> {
    let higher = config.experiment_id == ExperimentId::SchattenHigher;
    let ps = config.p_values.clone().unwrap_or_else(|| {
        if higher {
            vec![order as f64, order as f64 + 1.0]
        } else {
            vec![1.0, 2.0]
        }
    });
    config.p_values = Some(ps.clone());
    let mut out = Vec::new();
    for &p in &ps {
        if !p.is_finite() || p < 1.0 {
            return Err(Error::param(format!("Schatten index p must satisfy 1 <= p < inf (got {p})")));
        }
        if higher && p < order as f64 {
            return Err(Error::param(format!(
                "the weak-norm bound for n = {order} needs p >= n (got p = {p})"
            )));
        }
        let strong = if higher { p > order as f64 } else { p > 1.0 };
        for &rank in &config.ranks {
            out.push(Variant {
                label: format!("p={p},rank={}", rank.label()),
                p: Some(p),
                rank: Some(rank),
                strong,
                ..Variant::plain()
            });
        }
    }
    Ok(out)
}
