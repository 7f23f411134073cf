use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::{singular_values, Matrix};
use crate::error::{Error, Result};

pub type SeededRng = ChaCha8Rng;

/// Which norm a generated perturbation is normalized in.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormKind {
    Operator,
    Schatten(f64),
}

impl NormKind {
    pub fn of(&self, m: &Matrix) -> Result<f64> {
        let s = singular_values(m)?;
        match *self {
            NormKind::Operator => Ok(s.largest()),
            NormKind::Schatten(p) => s.schatten(p),
        }
    }

    fn of_values(&self, values: &[f64]) -> Result<f64> {
        match *self {
            NormKind::Operator => Ok(values.iter().fold(0.0f64, |a, v| a.max(v.abs()))),
            NormKind::Schatten(p) => {
                if p.is_nan() || p < 1.0 {
                    return Err(Error::param(format!("Schatten index must be >= 1 (got {p})")));
                }
                let top = values.iter().fold(0.0f64, |a, v| a.max(v.abs()));
                let sum: f64 = values.iter().map(|v| (v.abs() / top).powf(p)).sum();
                Ok(top * sum.powf(1.0 / p))
            }
        }
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derives an independent stream seed from a base seed and a key path
/// such as `(dim, scale bits, trial)`. Pure function of its arguments.
pub fn substream(seed: u64, parts: &[u64]) -> u64 {
    parts
        .iter()
        .fold(splitmix64(seed), |acc, &p| splitmix64(acc ^ splitmix64(p)))
}

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Complex Gaussian with `E|z|^2 = sigma^2`.
fn complex_gaussian(rng: &mut SeededRng, sigma: f64) -> Complex64 {
    let s = sigma / std::f64::consts::SQRT_2;
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(s * re, s * im)
}

fn gaussian_matrix(dim: usize, sigma: f64, rng: &mut SeededRng) -> Matrix {
    let mut g = Matrix::zeros(dim, dim);
    for i in 0..dim {
        for j in 0..dim {
            g[(i, j)] = complex_gaussian(rng, sigma);
        }
    }
    g
}

fn check_dim(dim: usize) -> Result<()> {
    if dim == 0 {
        return Err(Error::param("dimension must be at least 1"));
    }
    Ok(())
}

/// `(G + G^†)/2` for a complex Gaussian `G` with entry standard deviation `scale`.
/// The result is exactly Hermitian.
pub fn random_hermitian(dim: usize, scale: f64, seed: u64) -> Result<Matrix> {
    check_dim(dim)?;
    if !(scale > 0.0 && scale.is_finite()) {
        return Err(Error::param(format!("scale must be positive (got {scale})")));
    }
    let g = gaussian_matrix(dim, scale, &mut rng(seed));
    let mut h = Matrix::zeros(dim, dim);
    for i in 0..dim {
        h[(i, i)] = Complex64::new(g[(i, i)].re, 0.0);
        for j in (i + 1)..dim {
            let z = (g[(i, j)] + g[(j, i)].conj()) * 0.5;
            h[(i, j)] = z;
            h[(j, i)] = z.conj();
        }
    }
    Ok(h)
}

/// Ginibre matrix: independent complex Gaussians with `E|z|^2 = 1`.
pub fn random_ginibre(dim: usize, seed: u64) -> Result<Matrix> {
    check_dim(dim)?;
    Ok(gaussian_matrix(dim, 1.0, &mut rng(seed)))
}

/// Haar-distributed unitary: QR of a Ginibre matrix with the phases of
/// `diag(R)` moved into `Q`.
pub fn random_unitary(dim: usize, seed: u64) -> Result<Matrix> {
    check_dim(dim)?;
    let z = gaussian_matrix(dim, 1.0, &mut rng(seed));
    let qr = z.qr();
    let r = qr.r();
    let mut q = qr.q();
    for k in 0..dim {
        let d = r[(k, k)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..dim {
            q[(i, k)] *= phase;
        }
    }
    Ok(q)
}

/// Hermitian perturbation with prescribed norm and, optionally, rank.
///
/// Built as `W_r diag(lambda) W_r^†` from the first `r` columns of a Haar
/// unitary, then rescaled against its measured norm.
pub fn random_perturbation(
    dim: usize,
    target_norm: f64,
    rank: Option<usize>,
    norm_kind: NormKind,
    seed: u64,
) -> Result<Matrix> {
    check_dim(dim)?;
    if !(target_norm > 0.0 && target_norm.is_finite()) {
        return Err(Error::param(format!(
            "target norm must be positive (got {target_norm})"
        )));
    }
    let r = rank.unwrap_or(dim);
    if r == 0 || r > dim {
        return Err(Error::param(format!(
            "rank {r} is infeasible for dimension {dim}"
        )));
    }

    let w = random_unitary(dim, substream(seed, &[0]))?;
    let mut values_rng = rng(substream(seed, &[1]));
    let mut lambda = Vec::with_capacity(r);
    while lambda.len() < r {
        let x: f64 = values_rng.sample(StandardNormal);
        if x.abs() > 1e-3 {
            lambda.push(x);
        }
    }
    let c = target_norm / norm_kind.of_values(&lambda)?;
    for x in &mut lambda {
        *x *= c;
    }

    let mut k = Matrix::zeros(dim, dim);
    for (col, &l) in lambda.iter().enumerate() {
        let v = w.column(col);
        for i in 0..dim {
            let vi = v[i] * l;
            for j in 0..dim {
                k[(i, j)] += vi * v[j].conj();
            }
        }
    }
    let mut k = (&k + k.adjoint()) * Complex64::new(0.5, 0.0);

    let measured = norm_kind.of(&k)?;
    k *= Complex64::new(target_norm / measured, 0.0);
    Ok(k)
}
