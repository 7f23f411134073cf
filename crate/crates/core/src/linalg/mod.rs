//! Dense complex matrices, spectral and singular decompositions, Schatten
//! norms and seeded random ensembles.
//!
//! Every matrix in the crate is a square [`Matrix`] of `Complex64` entries.
//! Hermitian matrices are decomposed with a symmetric QR eigensolver after an
//! explicit symmetrization; unitary (more generally normal) matrices go through
//! a complex Schur form, whose triangular factor is diagonal up to round-off.

mod norms;
mod random;

pub use norms::{
    frobenius_norm, operator_norm, schatten_norm, singular_values, weak_schatten_norm,
    SingularSpectrum,
};
pub use random::{
    random_ginibre, random_hermitian, random_perturbation, random_unitary, rng, substream, NormKind,
    SeededRng,
};

use nalgebra::{DMatrix, Schur, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type Matrix = DMatrix<Complex64>;

const EIG_EPS: f64 = 1e-15;
const EIG_MAX_ITER: usize = 10_000;

/// Eigenvalues together with an orthonormal frame of eigenvectors.
///
/// Column `k` of `frame` is an eigenvector for `eigenvalues[k]`.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition<E> {
    pub eigenvalues: Vec<E>,
    pub frame: Matrix,
}

impl<E: Copy + Into<Complex64>> SpectralDecomposition<E> {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `frame * diag(g(eigenvalue)) * frame^†`.
    pub fn map<F>(&self, mut g: F) -> Matrix
    where
        F: FnMut(E) -> Complex64,
    {
        let n = self.dim();
        let mut scaled = self.frame.clone();
        for (k, &e) in self.eigenvalues.iter().enumerate() {
            let w = g(e);
            for i in 0..n {
                scaled[(i, k)] *= w;
            }
        }
        scaled * self.frame.adjoint()
    }

    pub fn reassemble(&self) -> Matrix {
        self.map(|e| e.into())
    }
}

pub fn identity(dim: usize) -> Matrix {
    Matrix::identity(dim, dim)
}

pub fn from_real_diagonal(values: &[f64]) -> Matrix {
    let n = values.len();
    Matrix::from_fn(n, n, |i, j| {
        if i == j {
            Complex64::new(values[i], 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

pub fn from_complex_diagonal(values: &[Complex64]) -> Matrix {
    let n = values.len();
    Matrix::from_fn(n, n, |i, j| if i == j { values[i] } else { Complex64::new(0.0, 0.0) })
}

/// Builds a matrix from row-major real entries.
pub fn from_real_rows(rows: &[&[f64]]) -> Matrix {
    let n = rows.len();
    Matrix::from_fn(n, n, |i, j| Complex64::new(rows[i][j], 0.0))
}

pub fn scale(m: &Matrix, s: f64) -> Matrix {
    m * Complex64::new(s, 0.0)
}

pub(crate) fn check_square_finite(m: &Matrix, what: &str) -> Result<()> {
    if m.nrows() == 0 || m.nrows() != m.ncols() {
        return Err(Error::input(format!(
            "{what}: expected a nonempty square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::input(format!("{what}: non-finite entry")));
    }
    Ok(())
}

/// Frobenius norm of `m - m^†`.
pub fn hermitian_deviation(m: &Matrix) -> f64 {
    (m - m.adjoint()).norm()
}

/// Frobenius norm of `m^† m - I`.
pub fn unitary_deviation(m: &Matrix) -> f64 {
    (m.adjoint() * m - identity(m.nrows())).norm()
}

/// Hermitian eigendecomposition with eigenvalues sorted ascending.
///
/// The input is replaced by `(H + H^†)/2` before decomposing; a nonzero
/// deviation is logged, not rejected.
pub fn eig_hermitian(h: &Matrix) -> Result<SpectralDecomposition<f64>> {
    check_square_finite(h, "eig_hermitian")?;
    let n = h.nrows();
    let deviation = hermitian_deviation(h);
    let sym = if deviation > 0.0 {
        log::debug!("eig_hermitian: symmetrizing input (deviation {deviation:e})");
        (h + h.adjoint()) * Complex64::new(0.5, 0.0)
    } else {
        h.clone()
    };
    let scale = sym.norm();

    let eig = SymmetricEigen::try_new(sym.clone(), EIG_EPS, EIG_MAX_ITER).ok_or_else(|| {
        Error::Numeric {
            message: "symmetric eigensolver did not converge".into(),
            residual: f64::NAN,
        }
    })?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let eigenvalues: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let frame = Matrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);

    let decomposition = SpectralDecomposition { eigenvalues, frame };
    verify(&decomposition, &sym, scale)?;
    Ok(decomposition)
}

/// Eigendecomposition of a unitary matrix; eigenvalues lie on the unit circle
/// and are sorted by argument in `(-pi, pi]`.
pub fn eig_unitary(u: &Matrix) -> Result<SpectralDecomposition<Complex64>> {
    check_square_finite(u, "eig_unitary")?;
    let n = u.nrows();
    let deviation = unitary_deviation(u);
    if deviation > 1e-10 * n as f64 {
        return Err(Error::input(format!(
            "eig_unitary: matrix is not unitary (deviation {deviation:e})"
        )));
    }

    let schur = Schur::try_new(u.clone(), EIG_EPS, EIG_MAX_ITER).ok_or_else(|| Error::Numeric {
        message: "Schur iteration did not converge".into(),
        residual: f64::NAN,
    })?;
    let (q, t) = schur.unpack();

    let raw: Vec<Complex64> = (0..n).map(|k| t[(k, k)]).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| unit_arg(raw[a]).total_cmp(&unit_arg(raw[b])));
    let eigenvalues: Vec<Complex64> = order
        .iter()
        .map(|&k| {
            let z = raw[k];
            z / z.norm()
        })
        .collect();
    let frame = Matrix::from_fn(n, n, |i, j| q[(i, order[j])]);

    let decomposition = SpectralDecomposition { eigenvalues, frame };
    verify(&decomposition, u, u.norm())?;
    Ok(decomposition)
}

/// Argument mapped into `(-pi, pi]`.
pub fn unit_arg(z: Complex64) -> f64 {
    let a = z.arg();
    if a == -std::f64::consts::PI {
        std::f64::consts::PI
    } else {
        a
    }
}

fn verify<E: Copy + Into<Complex64>>(
    d: &SpectralDecomposition<E>,
    input: &Matrix,
    scale: f64,
) -> Result<()> {
    let n = d.dim() as f64;
    let orth = unitary_deviation(&d.frame);
    if orth > 1e-12 * n.max(1.0) {
        return Err(Error::Numeric {
            message: "eigenvector frame is not unitary".into(),
            residual: orth,
        });
    }
    let residual = (d.reassemble() - input).norm();
    if residual > 1e-10 * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::Numeric {
            message: "decomposition does not reproduce its input".into(),
            residual,
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn diagonal_hermitian_is_sorted() {
        let d = eig_hermitian(&from_real_diagonal(&[3.0, 1.0])).unwrap();
        assert_eq!(d.eigenvalues, vec![1.0, 3.0]);
        // columns are a permutation of the identity
        assert!((d.frame[(1, 0)].norm() - 1.0).abs() < 1e-15);
        assert!((d.frame[(0, 1)].norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn scalar_hermitian() {
        let d = eig_hermitian(&from_real_diagonal(&[5.0])).unwrap();
        assert_eq!(d.eigenvalues, vec![5.0]);
        assert!((d.frame[(0, 0)].norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn swap_matrix_eigenvectors() {
        let d = eig_hermitian(&from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]])).unwrap();
        assert!((d.eigenvalues[0] + 1.0).abs() < 1e-14);
        assert!((d.eigenvalues[1] - 1.0).abs() < 1e-14);
        let s = 1.0 / 2f64.sqrt();
        // eigenvector for -1 is proportional to (1, -1)/sqrt(2)
        let v0 = d.frame.column(0);
        let phase = v0[0] / v0[0].norm();
        assert!((v0[0] / phase - c(s, 0.0)).norm() < 1e-14);
        assert!((v0[1] / phase - c(-s, 0.0)).norm() < 1e-14);
        let v1 = d.frame.column(1);
        let phase = v1[0] / v1[0].norm();
        assert!((v1[1] / phase - c(s, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn non_finite_rejected() {
        let mut m = from_real_diagonal(&[1.0, 2.0]);
        m[(0, 1)] = c(f64::NAN, 0.0);
        assert!(matches!(eig_hermitian(&m), Err(Error::Input(_))));
    }

    #[test]
    fn slightly_non_hermitian_is_symmetrized() {
        let mut m = from_real_rows(&[&[1.0, 2.0], &[2.0, -1.0]]);
        m[(0, 1)] += c(1e-14, 0.0);
        let d = eig_hermitian(&m).unwrap();
        assert!((d.eigenvalues[1] - 5f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn unitary_identity() {
        let d = eig_unitary(&identity(3)).unwrap();
        for z in d.eigenvalues {
            assert!((z - c(1.0, 0.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn unitary_diagonal() {
        let d = eig_unitary(&from_complex_diagonal(&[c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0)]))
            .unwrap();
        // ascending argument: 0, pi/2, pi
        assert!((d.eigenvalues[0] - c(1.0, 0.0)).norm() < 1e-14);
        assert!((d.eigenvalues[1] - c(0.0, 1.0)).norm() < 1e-14);
        assert!((d.eigenvalues[2] - c(-1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn rotation_eigenvalues() {
        let th = PI / 3.0;
        let r = from_real_rows(&[&[th.cos(), -th.sin()], &[th.sin(), th.cos()]]);
        let d = eig_unitary(&r).unwrap();
        assert!((d.eigenvalues[0] - Complex64::from_polar(1.0, -th)).norm() < 1e-13);
        assert!((d.eigenvalues[1] - Complex64::from_polar(1.0, th)).norm() < 1e-13);
        for z in &d.eigenvalues {
            assert!((z.norm() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn non_unitary_rejected() {
        let err = eig_unitary(&from_real_diagonal(&[1.0, 2.0])).unwrap_err();
        assert!(matches!(err, Error::Input(msg) if msg.contains("deviation")));
    }

    #[test]
    fn random_reassembly() {
        for dim in [1usize, 2, 5, 16, 48] {
            let h = random_hermitian(dim, 1.0, 7 + dim as u64).unwrap();
            let d = eig_hermitian(&h).unwrap();
            assert!((d.reassemble() - &h).norm() <= 1e-10 * h.norm());
            assert!(d.eigenvalues.windows(2).all(|w| w[0] <= w[1]));

            let u = random_unitary(dim, 11 + dim as u64).unwrap();
            let d = eig_unitary(&u).unwrap();
            assert!((d.reassemble() - &u).norm() <= 1e-10 * u.norm());
            assert!(unitary_deviation(&d.frame) <= 1e-12 * dim as f64);
            for z in &d.eigenvalues {
                assert!((z.norm() - 1.0).abs() < 1e-10);
            }
        }
    }
}
