use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::quadrature::integrate_pieces;
use super::seminorm::SeminormGrid;
use super::spec::{Domain, FunctionSpec};
use crate::error::{Error, Result};

/// Exact form of a modulus beyond a threshold, used to integrate the tail of
/// `omega(t)/t^2` in closed form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Tail {
    /// `omega(t) = value` for `t >= from`.
    Constant { from: f64, value: f64 },
    /// `omega(t) = coefficient * t^exponent` for `t >= from`.
    Power { from: f64, coefficient: f64, exponent: f64 },
}

impl Tail {
    pub fn from(&self) -> f64 {
        match *self {
            Tail::Constant { from, .. } | Tail::Power { from, .. } => from,
        }
    }

    /// `int_x^inf omega(t)/t^2 dt` for `x >= from`.
    fn integral_from(&self, x: f64) -> Result<f64> {
        match *self {
            Tail::Constant { value, .. } => Ok(value / x),
            Tail::Power { coefficient, exponent, .. } => {
                if exponent >= 1.0 {
                    return Err(Error::param(format!(
                        "tail exponent {exponent} >= 1: omega(t)/t^2 is not integrable"
                    )));
                }
                Ok(coefficient * x.powf(exponent - 1.0) / (1.0 - exponent))
            }
        }
    }
}

/// A modulus of continuity: nondecreasing, `omega(0) = 0`, subadditive.
#[derive(Clone)]
pub struct Modulus {
    pub name: String,
    eval: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    pub tail: Tail,
    /// Kinks inside `(0, tail.from)` where quadrature should split.
    pub breakpoints: Vec<f64>,
}

impl fmt::Debug for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Modulus")
            .field("name", &self.name)
            .field("tail", &self.tail)
            .field("breakpoints", &self.breakpoints)
            .finish()
    }
}

impl Modulus {
    pub fn new<F>(name: impl Into<String>, eval: F, tail: Tail) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Modulus {
            name: name.into(),
            eval: Arc::new(eval),
            tail,
            breakpoints: Vec::new(),
        }
    }

    /// `omega(t) = t^alpha`.
    pub fn power(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::param(format!(
                "power modulus requires 0 < alpha < 1 (got {alpha})"
            )));
        }
        Ok(Modulus::new(
            format!("t^{alpha}"),
            move |t: f64| t.powf(alpha),
            Tail::Power { from: 1.0, coefficient: 1.0, exponent: alpha },
        ))
    }

    /// `omega(t) = min(t, 1)`.
    pub fn capped_linear() -> Self {
        Modulus::new("min(t,1)", |t: f64| t.min(1.0), Tail::Constant { from: 1.0, value: 1.0 })
    }

    pub fn evaluate(&self, t: f64) -> f64 {
        (self.eval)(t)
    }
}

/// Configuration-facing choice of a catalog modulus.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "id", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModulusChoice {
    Power { alpha: f64 },
    CappedLinear,
}

impl ModulusChoice {
    pub fn build(&self) -> Result<Modulus> {
        match *self {
            ModulusChoice::Power { alpha } => Modulus::power(alpha),
            ModulusChoice::CappedLinear => Ok(Modulus::capped_linear()),
        }
    }
}

/// `omega*(x) = x int_x^inf omega(t)/t^2 dt`.
///
/// The integral runs adaptively over `[x, T]`, split at the declared
/// breakpoints and at dyadic multiples of `x`, and the tail beyond
/// `T = tail.from` is added in closed form.
pub fn omega_star(omega: &Modulus, x: f64) -> Result<f64> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::param(format!("omega_star requires x > 0 (got {x})")));
    }
    let threshold = omega.tail.from();
    if x >= threshold {
        return Ok(x * omega.tail.integral_from(x)?);
    }
    let tail = omega.tail.integral_from(threshold)?;

    let mut points = vec![x];
    let mut p = 2.0 * x;
    while p < threshold {
        points.push(p);
        p *= 2.0;
    }
    points.extend(omega.breakpoints.iter().copied().filter(|&b| b > x && b < threshold));
    points.push(threshold);
    points.sort_by(f64::total_cmp);
    points.dedup();

    let integrand = |t: f64| omega.evaluate(t) / (t * t);
    // integrand ~ omega(x)/x^2 near x; ask for error well under 1e-8 / x
    let tol = 1e-12 * (1.0 + integrand(x) * x);
    let q = integrate_pieces(&integrand, &points, tol);
    if !(q.error * x <= 1e-8) {
        return Err(Error::Numeric {
            message: format!("omega* quadrature did not reach tolerance at x={x}"),
            residual: q.error * x,
        });
    }
    Ok(x * (q.value + tail))
}

/// Grid pairs violating the modulus axioms.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ModulusReport {
    /// `Some(omega(0))` when it is not zero.
    pub origin: Option<f64>,
    /// Consecutive grid points `(s, t)`, `s < t`, with `omega(t) < omega(s)`.
    pub monotonicity: Vec<(f64, f64)>,
    /// Pairs `(x, y)` with `omega(x + y) > omega(x) + omega(y)`.
    pub subadditivity: Vec<(f64, f64)>,
}

impl ModulusReport {
    pub fn is_accepted(&self) -> bool {
        self.origin.is_none() && self.monotonicity.is_empty() && self.subadditivity.is_empty()
    }
}

const MODULUS_SLACK: f64 = 1e-9;

pub fn validate_modulus(omega: &Modulus, grid: &[f64]) -> ModulusReport {
    let mut pts: Vec<f64> = grid.iter().copied().filter(|t| *t >= 0.0).collect();
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    let vals: Vec<f64> = pts.iter().map(|&t| omega.evaluate(t)).collect();

    let mut report = ModulusReport::default();
    let zero = omega.evaluate(0.0);
    if zero.abs() > MODULUS_SLACK {
        report.origin = Some(zero);
    }
    for w in 0..pts.len().saturating_sub(1) {
        if vals[w + 1] < vals[w] - MODULUS_SLACK {
            report.monotonicity.push((pts[w], pts[w + 1]));
        }
    }
    for i in 0..pts.len() {
        for j in i..pts.len() {
            let (x, y) = (pts[i], pts[j]);
            if omega.evaluate(x + y) > vals[i] + vals[j] + MODULUS_SLACK {
                report.subadditivity.push((x, y));
            }
        }
    }
    report
}

/// Lower estimate of `sup |f(e^{i s}) - f(e^{i t})| / omega(|e^{i s} - e^{i t}|)`
/// over grid angles and dyadic arc steps.
pub fn lambda_omega_estimate(f: &FunctionSpec, omega: &Modulus, grid: &SeminormGrid) -> Result<f64> {
    if f.domain != Domain::Circle {
        return Err(Error::param("Lambda_omega estimate is defined for circle functions"));
    }
    let mut best = 0.0f64;
    for &t in &grid.steps {
        let chord = 2.0 * (t / 2.0).sin().abs();
        let denom = omega.evaluate(chord);
        if denom <= 0.0 {
            continue;
        }
        for i in 0..=grid.points {
            let x = grid.point(i);
            let d = (f.evaluate(x + t) - f.evaluate(x)).norm() / denom;
            best = best.max(d);
        }
    }
    Ok(best)
}
