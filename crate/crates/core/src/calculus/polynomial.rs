use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::function_space::{Domain, FunctionSpec};
use crate::linalg::{identity, Matrix};
use crate::util::signed_binomial;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// `sum_k c_k M^k`.
///
/// Dense coefficient lists use Horner's scheme; sparse high-degree lists
/// (such as lacunary series) multiply the needed powers from repeated squaring.
pub fn apply_polynomial(coefficients: &[Complex64], m: &Matrix) -> Matrix {
    let n = m.nrows();
    let nonzero: Vec<usize> = (0..coefficients.len()).filter(|&k| coefficients[k] != ZERO).collect();
    let Some(&degree) = nonzero.last() else {
        return Matrix::zeros(n, n);
    };
    let bits = usize::BITS - degree.leading_zeros();
    if degree < 8 || nonzero.len() * (bits as usize) * 2 >= degree {
        let mut acc = Matrix::zeros(n, n);
        for &c in coefficients[..=degree].iter().rev() {
            acc = &acc * m;
            for i in 0..n {
                acc[(i, i)] += c;
            }
        }
        return acc;
    }

    let mut squares = vec![m.clone()];
    for b in 1..bits {
        let prev = &squares[b as usize - 1];
        squares.push(prev * prev);
    }
    let mut acc = Matrix::zeros(n, n);
    for &k in &nonzero {
        let mut power = identity(n);
        for (b, sq) in squares.iter().enumerate() {
            if k >> b & 1 == 1 {
                power = &power * sq;
            }
        }
        acc += power * coefficients[k];
    }
    acc
}

/// Argument family for the contraction differences.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ContractionMode {
    /// `T + (k/n)(T - R)`, as the difference is printed; reaches `2T - R`.
    Literal,
    /// `R + (k/n)(T - R)`, which stays on the segment between `R` and `T`.
    #[default]
    Interpolating,
}

/// `sum_k (-1)^{n-k} C(n, k) f(X_k)` with `X_k` from the chosen family.
pub fn contraction_differences(
    coefficients: &[Complex64],
    t: &Matrix,
    r: &Matrix,
    n: u32,
    mode: ContractionMode,
) -> Result<Matrix> {
    if n == 0 {
        return Err(Error::param("difference order must be positive"));
    }
    if t.shape() != r.shape() {
        return Err(Error::input("contraction_differences: T and R have different shapes"));
    }
    let step = t - r;
    let base = match mode {
        ContractionMode::Literal => t,
        ContractionMode::Interpolating => r,
    };
    let mut acc = Matrix::zeros(t.nrows(), t.ncols());
    for k in 0..=n {
        let x = base + &step * Complex64::new(k as f64 / n as f64, 0.0);
        acc += apply_polynomial(coefficients, &x) * Complex64::new(signed_binomial(n, k), 0.0);
    }
    Ok(acc)
}

/// Coefficients `c_0 .. c_d` of an analytic trigonometric polynomial,
/// read as a polynomial in `z = e^{i theta}`.
pub fn analytic_coefficients(f: &FunctionSpec) -> Result<Vec<Complex64>> {
    if f.domain != Domain::Circle || !f.analytic {
        return Err(Error::param(format!(
            "{} is not an analytic circle function",
            f.name()
        )));
    }
    let terms = f.fourier_terms().ok_or_else(|| {
        Error::param(format!("{} has no finite Fourier expansion", f.name()))
    })?;
    let degree = terms.iter().map(|&(k, _)| k as usize).max().unwrap_or(0);
    let mut c = vec![ZERO; degree + 1];
    for (k, v) in terms {
        c[k as usize] += v;
    }
    Ok(c)
}

/// Fejér mean of an analytic circle function, as polynomial coefficients.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FejerPolynomial {
    pub degree: usize,
    pub coefficients: Vec<Complex64>,
    /// `sum_k |c_k| min(1, k/(N+1))`, an upper bound on `sup |f - sigma_N f|`.
    pub sup_error: f64,
}

/// `sigma_N f = sum_{k <= N} (1 - k/(N+1)) c_k z^k`.
pub fn fejer_truncation(f: &FunctionSpec, degree: usize) -> Result<FejerPolynomial> {
    if degree == 0 {
        return Err(Error::param("Fejér degree must be positive"));
    }
    let full = analytic_coefficients(f)?;
    let scale = (degree + 1) as f64;
    let mut coefficients = Vec::with_capacity(full.len().min(degree + 1));
    let mut sup_error = 0.0;
    for (k, &c) in full.iter().enumerate() {
        let weight = (1.0 - k as f64 / scale).max(0.0);
        if k <= degree {
            coefficients.push(c * weight);
        }
        sup_error += c.norm() * (1.0 - weight);
    }
    Ok(FejerPolynomial { degree, coefficients, sup_error })
}
