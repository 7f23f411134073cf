use num_complex::Complex64;

use super::spec::{Domain, FunctionSpec};
use crate::error::{Error, Result};
use crate::util::signed_binomial;

/// Sample points and dyadic difference steps for seminorm estimation.
///
/// Grid points are `lo + i * (hi - lo) / points` for `i = 0..=points`, so
/// doubling `points` yields a superset of the previous grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SeminormGrid {
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
    pub steps: Vec<f64>,
}

impl SeminormGrid {
    /// Grid with spacing at most `spacing` and steps `2^-k` for `k` in `k_range`.
    pub fn new(lo: f64, hi: f64, spacing: f64, k_range: std::ops::RangeInclusive<i32>) -> Result<Self> {
        if !(lo < hi) || !(spacing > 0.0) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::param(format!(
                "invalid seminorm grid [{lo}, {hi}] with spacing {spacing}"
            )));
        }
        let points = ((hi - lo) / spacing).ceil() as usize;
        let steps = k_range.map(|k| 2f64.powi(-k)).collect();
        Ok(SeminormGrid { lo, hi, points: points.max(1), steps })
    }

    /// Default grid for `f`: spacing `1e-4`, steps `2^0 .. 2^-14`, over
    /// `[-1, 1]` for line functions and `(-pi, pi]` for circle functions.
    pub fn default_for(f: &FunctionSpec) -> Self {
        let (lo, hi) = match f.domain {
            Domain::Line => (f.interval.0.max(-1.0), f.interval.1.min(1.0)),
            Domain::Circle => (-std::f64::consts::PI, std::f64::consts::PI),
        };
        Self::new(lo, hi, 1e-4, 0..=14).expect("static grid is valid")
    }

    pub fn refined(&self) -> Self {
        SeminormGrid { points: self.points * 2, ..self.clone() }
    }

    pub fn point(&self, i: usize) -> f64 {
        self.lo + i as f64 * ((self.hi - self.lo) / self.points as f64)
    }
}

/// `sum_{k=0}^{n} (-1)^{n-k} C(n,k) f(x + k t)`.
pub fn nth_difference(f: &FunctionSpec, n: u32, x: f64, t: f64) -> Complex64 {
    (0..=n)
        .map(|k| f.evaluate(x + k as f64 * t) * signed_binomial(n, k))
        .sum()
}

/// Lower estimate of the `Lambda_alpha` seminorm
/// `sup |Delta_t^n f(x)| / t^alpha` over the grid, with `n` and `alpha` taken
/// from the function's class metadata.
pub fn seminorm_estimate(f: &FunctionSpec, grid: &SeminormGrid) -> Result<f64> {
    seminorm_estimate_with(f, f.class_order, f.class_exponent, grid)
}

pub fn seminorm_estimate_with(
    f: &FunctionSpec,
    order: u32,
    exponent: f64,
    grid: &SeminormGrid,
) -> Result<f64> {
    if f.domain == Domain::Line && (grid.lo < f.interval.0 || grid.hi > f.interval.1) {
        return Err(Error::domain(
            format!(
                "seminorm grid [{}, {}] leaves the working interval of {}",
                grid.lo,
                grid.hi,
                f.name()
            ),
            vec![grid.lo, grid.hi],
        ));
    }
    let mut best = 0.0f64;
    for &t in &grid.steps {
        let reach = order as f64 * t;
        let denom = t.powf(exponent);
        for i in 0..=grid.points {
            let x = grid.point(i);
            if f.domain == Domain::Line && x + reach > grid.hi {
                break;
            }
            let d = nth_difference(f, order, x, t).norm() / denom;
            if d > best {
                best = d;
            }
        }
    }
    Ok(best)
}

/// `max |f|` over the grid points.
pub fn sup_norm_estimate(f: &FunctionSpec, grid: &SeminormGrid) -> f64 {
    (0..=grid.points)
        .map(|i| f.evaluate(grid.point(i)).norm())
        .fold(0.0, f64::max)
}
