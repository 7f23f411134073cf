//! Functional calculus for Hermitian and unitary matrices, divided
//! differences, the double operator integral as a Schur multiplier, and the
//! higher-order operator differences used by the experiments.

mod polynomial;

pub use polynomial::{
    analytic_coefficients, apply_polynomial, contraction_differences, fejer_truncation,
    ContractionMode, FejerPolynomial,
};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::function_space::{exp_i, Domain, FunctionSpec};
use crate::linalg::{eig_hermitian, eig_unitary, unit_arg, Matrix, SpectralDecomposition};
use crate::util::signed_binomial;

fn require_domain(f: &FunctionSpec, domain: Domain, op: &str) -> Result<()> {
    if f.domain != domain {
        return Err(Error::param(format!(
            "{op} needs a {domain:?} function, got {}",
            f.name()
        )));
    }
    Ok(())
}

fn check_spectrum(f: &FunctionSpec, eigenvalues: &[f64]) -> Result<()> {
    let offending: Vec<f64> = eigenvalues.iter().copied().filter(|&x| !f.contains(x)).collect();
    if !offending.is_empty() {
        return Err(Error::domain(
            format!(
                "spectrum leaves the working interval [{}, {}] of {}",
                f.interval.0,
                f.interval.1,
                f.name()
            ),
            offending,
        ));
    }
    Ok(())
}

/// `f(A)` for a decomposition already in hand.
fn apply_decomposed(f: &FunctionSpec, d: &SpectralDecomposition<f64>) -> Result<Matrix> {
    check_spectrum(f, &d.eigenvalues)?;
    let m = d.map(|x| f.evaluate(x));
    if d.eigenvalues.iter().all(|&x| f.evaluate(x).im == 0.0) {
        Ok((&m + m.adjoint()) * Complex64::new(0.5, 0.0))
    } else {
        Ok(m)
    }
}

/// `f(A)` through the spectral theorem for Hermitian `A`.
pub fn apply_hermitian(f: &FunctionSpec, a: &Matrix) -> Result<Matrix> {
    require_domain(f, Domain::Line, "apply_hermitian")?;
    apply_decomposed(f, &eig_hermitian(a)?)
}

/// `f(U)` for unitary `U`, with `f` read as a function of the angle.
pub fn apply_unitary(f: &FunctionSpec, u: &Matrix) -> Result<Matrix> {
    require_domain(f, Domain::Circle, "apply_unitary")?;
    let d = eig_unitary(u)?;
    Ok(d.map(|z| f.evaluate(unit_arg(z))))
}

/// Value of the divided difference kernel at `(x, y)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DividedDifference {
    pub value: Complex64,
    /// Set when `x` and `y` coincide and `f` has no derivative there, so the
    /// value was taken as zero.
    pub confluent_flag: bool,
}

/// `(f(x) - f(y)) / (x - y)`; for `|x - y| <= 1e-12 max(1, |x|, |y|)` the
/// derivative at `x` if it exists, otherwise zero with the flag raised.
pub fn divided_difference(f: &FunctionSpec, x: f64, y: f64) -> DividedDifference {
    let tau = 1e-12 * 1f64.max(x.abs()).max(y.abs());
    if (x - y).abs() > tau {
        return DividedDifference {
            value: (f.evaluate(x) - f.evaluate(y)) / (x - y),
            confluent_flag: false,
        };
    }
    match f.derivative(x) {
        Some(d) => DividedDifference { value: d, confluent_flag: false },
        None => DividedDifference { value: Complex64::new(0.0, 0.0), confluent_flag: true },
    }
}

/// `f(A) - f(B)` as the Schur multiplier of the divided difference kernel.
#[derive(Debug, Clone)]
pub struct DoiDifference {
    pub value: Matrix,
    /// Eigenvalue pairs that hit the flagged confluent branch.
    pub flagged_pairs: usize,
}

/// `P (D o (P^† (A - B) Q)) Q^†` with `A = P diag(lambda) P^†`,
/// `B = Q diag(mu) Q^†` and `D_ij = f[lambda_i, mu_j]`.
pub fn doi_first_difference(f: &FunctionSpec, a: &Matrix, b: &Matrix) -> Result<DoiDifference> {
    require_domain(f, Domain::Line, "doi_first_difference")?;
    if a.shape() != b.shape() {
        return Err(Error::input(format!(
            "doi_first_difference: shapes {:?} and {:?} differ",
            a.shape(),
            b.shape()
        )));
    }
    let da = eig_hermitian(a)?;
    let db = eig_hermitian(b)?;
    check_spectrum(f, &da.eigenvalues)?;
    check_spectrum(f, &db.eigenvalues)?;

    let p = &da.frame;
    let q = &db.frame;
    let mut inner = p.adjoint() * (a - b) * q;
    let mut flagged_pairs = 0;
    for (i, &l) in da.eigenvalues.iter().enumerate() {
        for (j, &m) in db.eigenvalues.iter().enumerate() {
            let dd = divided_difference(f, l, m);
            flagged_pairs += dd.confluent_flag as usize;
            inner[(i, j)] *= dd.value;
        }
    }
    Ok(DoiDifference { value: p * inner * q.adjoint(), flagged_pairs })
}

fn shifted(a: &Matrix, k: &Matrix, j: u32) -> Matrix {
    a + k * Complex64::new(j as f64, 0.0)
}

/// `(Delta_K^n f)(A) = sum_j (-1)^{n-j} C(n, j) f(A + jK)`.
pub fn delta_n(f: &FunctionSpec, a: &Matrix, k: &Matrix, n: u32) -> Result<Matrix> {
    if n == 0 {
        return Err(Error::param("difference order must be positive"));
    }
    if a.shape() != k.shape() {
        return Err(Error::input("delta_n: A and K have different shapes"));
    }
    let mut acc = Matrix::zeros(a.nrows(), a.ncols());
    for j in 0..=n {
        let term = apply_hermitian(f, &shifted(a, k, j)).map_err(|e| match e {
            Error::Domain { message, offending } => Error::Domain {
                message: format!("A + {j}K: {message}"),
                offending,
            },
            other => other,
        })?;
        acc += term * Complex64::new(signed_binomial(n, j), 0.0);
    }
    Ok(acc)
}

/// `e^{itA}` through the Hermitian eigendecomposition.
pub fn exp_i_hermitian(a: &Matrix, t: f64) -> Result<Matrix> {
    apply_hermitian(&exp_i(t), a)
}

/// `sum_k (-1)^{n-k} C(n, k) f(e^{ikA} U)`.
pub fn unitary_multiplicative_differences(
    f: &FunctionSpec,
    u: &Matrix,
    a: &Matrix,
    n: u32,
) -> Result<Matrix> {
    require_domain(f, Domain::Circle, "unitary_multiplicative_differences")?;
    if n == 0 {
        return Err(Error::param("difference order must be positive"));
    }
    if a.shape() != u.shape() {
        return Err(Error::input("unitary_multiplicative_differences: U and A have different shapes"));
    }
    let d = eig_hermitian(a)?;
    let mut acc = Matrix::zeros(u.nrows(), u.ncols());
    for k in 0..=n {
        let rotation = d.map(|x| Complex64::from_polar(1.0, k as f64 * x));
        acc += apply_unitary(f, &(rotation * u))? * Complex64::new(signed_binomial(n, k), 0.0);
    }
    Ok(acc)
}
