use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Domain {
    Line,
    Circle,
}

/// One Fourier term `c e^{ik theta}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrigTerm {
    pub k: i64,
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

impl TrigTerm {
    pub fn coefficient(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

/// The concrete scalar function behind a [`FunctionSpec`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "id", rename_all = "snake_case", deny_unknown_fields)]
pub enum FunctionKind {
    /// `|x|^alpha` on the line.
    PowerAlpha { alpha: f64 },
    /// `sin(sigma x)`, entire of exponential type `sigma`.
    SinSigma { sigma: f64 },
    /// `x log|x|` times a smooth cutoff supported in `[-2, 2]`.
    Xlogx,
    /// Real polynomial `sum c_k x^k` on the line.
    Polynomial { coefficients: Vec<f64> },
    /// `e^{ikx}` on the line.
    ExpI { k: f64 },
    /// `sum c_k e^{ik theta}` on the circle.
    TrigPoly { terms: Vec<TrigTerm> },
    /// `sum_{j=0}^{levels} 2^{-j alpha} e^{i 2^j theta}` on the circle.
    Lacunary { alpha: f64, levels: u32 },
    /// `|theta|` for `theta` in `(-pi, pi]`: Lipschitz, not smooth.
    Triangle,
}

/// An evaluable scalar function together with its smoothness-class metadata.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FunctionSpec {
    pub kind: FunctionKind,
    pub domain: Domain,
    /// `n` with `n - 1 <= class_exponent < n`.
    pub class_order: u32,
    pub class_exponent: f64,
    /// Fourier coefficients vanish at negative indices (circle only).
    pub analytic: bool,
    /// Polynomials, trigonometric polynomials and `sin`: degenerate witnesses
    /// for exponent-recovery experiments.
    pub smooth: bool,
    pub declared_seminorm: Option<f64>,
    pub sup_norm_hint: Option<f64>,
    /// Working interval for line functions; `(-pi, pi]` for circle functions.
    pub interval: (f64, f64),
}

/// Smooth cutoff equal to 1 on `[-1, 1]` and 0 outside `(-2, 2)`.
pub const WINDOW_DESCRIPTION: &str =
    "w(x) = h(2-|x|)/(h(2-|x|)+h(|x|-1)), h(s) = exp(-1/s) for s > 0, else 0";

fn bump(s: f64) -> f64 {
    if s > 0.0 {
        (-1.0 / s).exp()
    } else {
        0.0
    }
}

fn bump_prime(s: f64) -> f64 {
    if s > 0.0 {
        bump(s) / (s * s)
    } else {
        0.0
    }
}

fn window(x: f64) -> f64 {
    let u = x.abs();
    if u <= 1.0 {
        return 1.0;
    }
    if u >= 2.0 {
        return 0.0;
    }
    let a = bump(2.0 - u);
    let b = bump(u - 1.0);
    a / (a + b)
}

fn window_prime(x: f64) -> f64 {
    let u = x.abs();
    if u <= 1.0 || u >= 2.0 {
        return 0.0;
    }
    let a = bump(2.0 - u);
    let b = bump(u - 1.0);
    let da = bump_prime(2.0 - u);
    let db = bump_prime(u - 1.0);
    let dw_du = -(da * b + a * db) / ((a + b) * (a + b));
    dw_du * x.signum()
}

/// Maps an angle into `(-pi, pi]`.
pub fn wrap_angle(theta: f64) -> f64 {
    let mut t = theta.rem_euclid(2.0 * PI);
    if t > PI {
        t -= 2.0 * PI;
    }
    t
}

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn order_for(alpha: f64) -> u32 {
    alpha.floor() as u32 + 1
}

impl FunctionSpec {
    fn new(kind: FunctionKind, domain: Domain) -> Self {
        let interval = match domain {
            Domain::Line => (-16.0, 16.0),
            Domain::Circle => (-PI, PI),
        };
        FunctionSpec {
            kind,
            domain,
            class_order: 1,
            class_exponent: 0.5,
            analytic: false,
            smooth: false,
            declared_seminorm: None,
            sup_norm_hint: None,
            interval,
        }
    }

    pub fn name(&self) -> String {
        match &self.kind {
            FunctionKind::PowerAlpha { alpha } => format!("power_alpha({alpha})"),
            FunctionKind::SinSigma { sigma } => format!("sin_sigma({sigma})"),
            FunctionKind::Xlogx => "xloglx".to_string(),
            FunctionKind::Polynomial { coefficients } => format!("polynomial({coefficients:?})"),
            FunctionKind::ExpI { k } => format!("exp_i({k})"),
            FunctionKind::TrigPoly { terms } => {
                let ks: Vec<i64> = terms.iter().map(|t| t.k).collect();
                format!("trig_poly(k={ks:?})")
            }
            FunctionKind::Lacunary { alpha, levels } => format!("lacunary({alpha}, {levels})"),
            FunctionKind::Triangle => "triangle".to_string(),
        }
    }

    /// Overrides the smoothness class; requires `n - 1 <= alpha < n`.
    pub fn with_class(mut self, order: u32, exponent: f64) -> Result<Self> {
        check_class(order, exponent)?;
        self.class_order = order;
        self.class_exponent = exponent;
        Ok(self)
    }

    pub fn with_interval(mut self, lo: f64, hi: f64) -> Result<Self> {
        if self.domain != Domain::Line || !(lo < hi) {
            return Err(Error::param("working interval applies to line functions with lo < hi"));
        }
        self.interval = (lo, hi);
        Ok(self)
    }

    pub fn contains(&self, x: f64) -> bool {
        match self.domain {
            Domain::Line => x >= self.interval.0 && x <= self.interval.1,
            Domain::Circle => x.is_finite(),
        }
    }

    /// Evaluates at `x` (line) or at the angle `x` (circle, any real angle).
    pub fn evaluate(&self, x: f64) -> Complex64 {
        match &self.kind {
            FunctionKind::PowerAlpha { alpha } => real(x.abs().powf(*alpha)),
            FunctionKind::SinSigma { sigma } => real((sigma * x).sin()),
            FunctionKind::Xlogx => {
                if x == 0.0 {
                    real(0.0)
                } else {
                    real(x * x.abs().ln() * window(x))
                }
            }
            FunctionKind::Polynomial { coefficients } => {
                real(coefficients.iter().rev().fold(0.0, |acc, c| acc * x + c))
            }
            FunctionKind::ExpI { k } => Complex64::from_polar(1.0, k * x),
            FunctionKind::TrigPoly { terms } => terms
                .iter()
                .map(|t| t.coefficient() * Complex64::from_polar(1.0, t.k as f64 * x))
                .sum(),
            FunctionKind::Lacunary { alpha, levels } => (0..=*levels)
                .map(|j| {
                    let freq = 2f64.powi(j as i32);
                    Complex64::from_polar(freq.powf(-alpha), freq * x)
                })
                .sum(),
            FunctionKind::Triangle => real(wrap_angle(x).abs()),
        }
    }

    /// Domain-checked evaluation for line functions.
    pub fn evaluate_checked(&self, x: f64) -> Result<Complex64> {
        if !self.contains(x) {
            return Err(Error::domain(
                format!(
                    "{} evaluated at {x} outside working interval [{}, {}]",
                    self.name(),
                    self.interval.0,
                    self.interval.1
                ),
                vec![x],
            ));
        }
        Ok(self.evaluate(x))
    }

    /// Derivative in `x` (line) or in the angle (circle); `None` where it
    /// does not exist.
    pub fn derivative(&self, x: f64) -> Option<Complex64> {
        match &self.kind {
            FunctionKind::PowerAlpha { alpha } => {
                if x == 0.0 {
                    (*alpha > 1.0).then(|| real(0.0))
                } else {
                    Some(real(alpha * x.abs().powf(alpha - 1.0) * x.signum()))
                }
            }
            FunctionKind::SinSigma { sigma } => Some(real(sigma * (sigma * x).cos())),
            FunctionKind::Xlogx => {
                if x == 0.0 {
                    None
                } else {
                    let l = x.abs().ln();
                    Some(real((l + 1.0) * window(x) + x * l * window_prime(x)))
                }
            }
            FunctionKind::Polynomial { coefficients } => {
                let d = coefficients
                    .iter()
                    .enumerate()
                    .skip(1)
                    .rev()
                    .fold(0.0, |acc, (k, c)| acc * x + k as f64 * c);
                Some(real(d))
            }
            FunctionKind::ExpI { k } => Some(Complex64::new(0.0, *k) * Complex64::from_polar(1.0, k * x)),
            FunctionKind::TrigPoly { terms } => Some(
                terms
                    .iter()
                    .map(|t| {
                        Complex64::new(0.0, t.k as f64)
                            * t.coefficient()
                            * Complex64::from_polar(1.0, t.k as f64 * x)
                    })
                    .sum(),
            ),
            FunctionKind::Lacunary { alpha, levels } => Some(
                (0..=*levels)
                    .map(|j| {
                        let freq = 2f64.powi(j as i32);
                        Complex64::new(0.0, freq.powf(1.0 - alpha))
                            * Complex64::from_polar(1.0, freq * x)
                    })
                    .sum(),
            ),
            FunctionKind::Triangle => {
                let t = wrap_angle(x);
                (t != 0.0 && t != PI).then(|| real(t.signum()))
            }
        }
    }

    /// Fourier coefficients `(k, c_k)` when the function is a trigonometric
    /// polynomial.
    pub fn fourier_terms(&self) -> Option<Vec<(i64, Complex64)>> {
        match &self.kind {
            FunctionKind::TrigPoly { terms } => {
                Some(terms.iter().map(|t| (t.k, t.coefficient())).collect())
            }
            FunctionKind::Lacunary { alpha, levels } => Some(
                (0..=*levels)
                    .map(|j| {
                        let freq = 1i64 << j;
                        (freq, real((freq as f64).powf(-alpha)))
                    })
                    .collect(),
            ),
            _ => None,
        }
    }

    /// Degree of a polynomial or trigonometric polynomial.
    pub fn degree(&self) -> Option<usize> {
        match &self.kind {
            FunctionKind::Polynomial { coefficients } => Some(
                coefficients
                    .iter()
                    .rposition(|c| *c != 0.0)
                    .unwrap_or(0),
            ),
            FunctionKind::TrigPoly { terms } => Some(
                terms
                    .iter()
                    .filter(|t| t.coefficient() != Complex64::new(0.0, 0.0))
                    .map(|t| t.k.unsigned_abs() as usize)
                    .max()
                    .unwrap_or(0),
            ),
            FunctionKind::Lacunary { levels, .. } => Some(1usize << levels),
            _ => None,
        }
    }
}

impl FunctionKind {
    /// Builds the catalog function with its default class metadata.
    pub fn build(&self) -> Result<FunctionSpec> {
        match self {
            FunctionKind::PowerAlpha { alpha } => power_alpha(*alpha),
            FunctionKind::SinSigma { sigma } => sin_sigma(*sigma),
            FunctionKind::Xlogx => Ok(xloglx()),
            FunctionKind::Polynomial { coefficients } => polynomial(coefficients.clone()),
            FunctionKind::ExpI { k } => {
                if !k.is_finite() {
                    return Err(Error::param("exp_i frequency must be finite"));
                }
                Ok(exp_i(*k))
            }
            FunctionKind::TrigPoly { terms } => trig_poly(terms.clone()),
            FunctionKind::Lacunary { alpha, levels } => lacunary(*alpha, *levels),
            FunctionKind::Triangle => Ok(triangle()),
        }
    }
}

pub(crate) fn check_class(order: u32, exponent: f64) -> Result<()> {
    if order == 0 || !(exponent > 0.0) || !((order - 1) as f64 <= exponent && exponent < order as f64) {
        return Err(Error::param(format!(
            "class requires n >= 1 and n-1 <= alpha < n (got n={order}, alpha={exponent})"
        )));
    }
    Ok(())
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if !(v > 0.0 && v.is_finite()) {
        return Err(Error::param(format!("{name} must be positive (got {v})")));
    }
    Ok(())
}

/// `|x|^alpha`; the seminorm is declared as 1 for `0 < alpha < 1`.
pub fn power_alpha(alpha: f64) -> Result<FunctionSpec> {
    check_positive("alpha", alpha)?;
    if alpha.fract() == 0.0 {
        return Err(Error::param(format!(
            "power_alpha requires a non-integer exponent (got {alpha})"
        )));
    }
    let mut f = FunctionSpec::new(FunctionKind::PowerAlpha { alpha }, Domain::Line);
    f.class_order = order_for(alpha);
    f.class_exponent = alpha;
    if alpha < 1.0 {
        f.declared_seminorm = Some(1.0);
    }
    f.sup_norm_hint = Some(f.interval.1.powf(alpha));
    Ok(f)
}

pub fn sin_sigma(sigma: f64) -> Result<FunctionSpec> {
    check_positive("sigma", sigma)?;
    let mut f = FunctionSpec::new(FunctionKind::SinSigma { sigma }, Domain::Line);
    f.interval = (-1024.0, 1024.0);
    f.smooth = true;
    f.class_order = 2;
    f.class_exponent = 1.0;
    f.sup_norm_hint = Some(1.0);
    Ok(f)
}

/// Zygmund-class witness `x log|x|`, windowed to `[-2, 2]`.
pub fn xloglx() -> FunctionSpec {
    let mut f = FunctionSpec::new(FunctionKind::Xlogx, Domain::Line);
    f.interval = (-8.0, 8.0);
    f.class_order = 2;
    f.class_exponent = 1.0;
    f
}

pub fn polynomial(coefficients: Vec<f64>) -> Result<FunctionSpec> {
    if coefficients.iter().any(|c| !c.is_finite()) {
        return Err(Error::param("polynomial coefficients must be finite"));
    }
    let mut f = FunctionSpec::new(FunctionKind::Polynomial { coefficients }, Domain::Line);
    f.interval = (-1024.0, 1024.0);
    f.smooth = true;
    let d = f.degree().unwrap_or(0);
    f.class_order = d as u32 + 1;
    f.class_exponent = (d as f64).max(0.5);
    Ok(f)
}

/// `x^n`.
pub fn monomial(n: usize) -> FunctionSpec {
    let mut c = vec![0.0; n + 1];
    c[n] = 1.0;
    polynomial(c).expect("finite coefficients")
}

pub fn exp_i(k: f64) -> FunctionSpec {
    let mut f = FunctionSpec::new(FunctionKind::ExpI { k }, Domain::Line);
    f.interval = (f64::NEG_INFINITY, f64::INFINITY);
    f.smooth = true;
    f.sup_norm_hint = Some(1.0);
    f
}

pub fn trig_poly(terms: Vec<TrigTerm>) -> Result<FunctionSpec> {
    if terms.iter().any(|t| !t.re.is_finite() || !t.im.is_finite()) {
        return Err(Error::param("trigonometric coefficients must be finite"));
    }
    let analytic = terms.iter().all(|t| t.k >= 0);
    let sup: f64 = terms.iter().map(|t| t.coefficient().norm()).sum();
    let mut f = FunctionSpec::new(FunctionKind::TrigPoly { terms }, Domain::Circle);
    f.analytic = analytic;
    f.smooth = true;
    f.sup_norm_hint = Some(sup);
    Ok(f)
}

/// `e^{ik theta}` with unit coefficient.
pub fn trig_monomial(k: i64) -> FunctionSpec {
    trig_poly(vec![TrigTerm { k, re: 1.0, im: 0.0 }]).expect("finite coefficient")
}

/// Lacunary series `sum_{j <= levels} 2^{-j alpha} e^{i 2^j theta}`.
pub fn lacunary(alpha: f64, levels: u32) -> Result<FunctionSpec> {
    check_positive("alpha", alpha)?;
    if levels > 40 {
        return Err(Error::param(format!("lacunary levels must be <= 40 (got {levels})")));
    }
    let mut f = FunctionSpec::new(FunctionKind::Lacunary { alpha, levels }, Domain::Circle);
    f.class_order = order_for(alpha);
    f.class_exponent = alpha;
    f.analytic = true;
    f.sup_norm_hint = Some((0..=levels).map(|j| 2f64.powf(-(j as f64) * alpha)).sum());
    Ok(f)
}

/// `|theta|` on `(-pi, pi]`; Lipschitz, hence in every `Lambda_omega` with
/// `omega(t) >= c min(t, 1)`.
pub fn triangle() -> FunctionSpec {
    let mut f = FunctionSpec::new(FunctionKind::Triangle, Domain::Circle);
    f.class_order = 2;
    f.class_exponent = 1.0;
    f.sup_norm_hint = Some(PI);
    f
}

/// Named default members of the function catalog.
pub fn catalog() -> BTreeMap<String, FunctionSpec> {
    let mut m = BTreeMap::new();
    let entries = [
        power_alpha(0.5).expect("valid"),
        sin_sigma(1.0).expect("valid"),
        xloglx(),
        trig_monomial(1),
        lacunary(0.5, 8).expect("valid"),
        lacunary(1.0, 16).expect("valid"),
        lacunary(1.5, 8).expect("valid"),
        triangle(),
    ];
    for f in entries {
        m.insert(f.name(), f);
    }
    m
}
