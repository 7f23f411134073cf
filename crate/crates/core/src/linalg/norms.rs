use serde::{Deserialize, Serialize};

use super::{check_square_finite, Matrix};
use crate::error::{Error, Result};

/// Singular values `s_0 >= s_1 >= ... >= s_{dim-1} >= 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SingularSpectrum {
    pub values: Vec<f64>,
}

impl SingularSpectrum {
    pub fn largest(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    /// `(sum s_n^p)^(1/p)`, or `s_0` for `p = inf`.
    pub fn schatten(&self, p: f64) -> Result<f64> {
        check_index(p)?;
        if p.is_infinite() {
            return Ok(self.largest());
        }
        // factor out s_0 so large p neither overflows nor underflows
        let top = self.largest();
        if top == 0.0 {
            return Ok(0.0);
        }
        let sum: f64 = self.values.iter().map(|s| (s / top).powf(p)).sum();
        Ok(top * sum.powf(1.0 / p))
    }

    /// `sup_n (1+n)^(1/p) s_n`.
    pub fn weak_schatten(&self, p: f64) -> Result<f64> {
        check_index(p)?;
        if p.is_infinite() {
            return Ok(self.largest());
        }
        Ok(self
            .values
            .iter()
            .enumerate()
            .map(|(n, s)| (1.0 + n as f64).powf(1.0 / p) * s)
            .fold(0.0, f64::max))
    }
}

fn check_index(p: f64) -> Result<()> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::param(format!(
            "Schatten index must satisfy p >= 1 (got {p})"
        )));
    }
    Ok(())
}

pub fn singular_values(m: &Matrix) -> Result<SingularSpectrum> {
    check_square_finite(m, "singular_values")?;
    let svd = m.clone().try_svd(false, false, 1e-15, 10_000).ok_or_else(|| Error::Numeric {
        message: "SVD did not converge".into(),
        residual: f64::NAN,
    })?;
    let mut values: Vec<f64> = svd.singular_values.iter().map(|s| s.max(0.0)).collect();
    values.sort_by(|a, b| b.total_cmp(a));
    Ok(SingularSpectrum { values })
}

pub fn schatten_norm(m: &Matrix, p: f64) -> Result<f64> {
    check_index(p)?;
    singular_values(m)?.schatten(p)
}

pub fn weak_schatten_norm(m: &Matrix, p: f64) -> Result<f64> {
    check_index(p)?;
    singular_values(m)?.weak_schatten(p)
}

pub fn operator_norm(m: &Matrix) -> Result<f64> {
    Ok(singular_values(m)?.largest())
}

pub fn frobenius_norm(m: &Matrix) -> f64 {
    m.norm()
}
