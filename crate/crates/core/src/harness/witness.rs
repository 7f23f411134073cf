use num_complex::Complex64;
use serde::Serialize;

use super::config::ExperimentId;
use super::prepare::{PreparedExperiment, Variant};
use crate::calculus::{
    apply_hermitian, apply_unitary, contraction_differences, delta_n, doi_first_difference,
    exp_i_hermitian, unitary_multiplicative_differences,
};
use crate::error::{Error, Result};
use crate::function_space::omega_star;
use crate::linalg::{
    eig_hermitian, frobenius_norm, operator_norm, random_ginibre, random_hermitian,
    random_perturbation, random_unitary, singular_values, substream, Matrix, NormKind,
};

/// The operators of one trial.
#[derive(Debug, Clone, PartialEq)]
pub enum Witness {
    /// Base `A` and perturbation `K`. First differences compare `A` with
    /// `A + K`; the Zygmund difference is centered at `A`; `Delta_K^n` starts
    /// at `A`.
    SelfAdjoint { a: Matrix, k: Matrix },
    /// `U` and `V = e^{iH} U`.
    Unitary { u: Matrix, h: Matrix },
    /// `U` and the Hermitian generator `A` of `e^{ikA} U`.
    Multiplicative { u: Matrix, a: Matrix },
    /// Contractions `T` and `R`.
    Contraction { t: Matrix, r: Matrix },
}

/// Identifies a trial: its sweep cell, variant and index.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrialKey {
    pub dim: usize,
    pub scale: f64,
    pub variant: usize,
    pub trial: usize,
}

impl TrialKey {
    /// Seed of the trial's random substream. The variant is deliberately
    /// not part of the key: Bernstein sweeps reuse one witness family for
    /// every exponential type.
    pub fn witness_seed(&self, seed: u64) -> u64 {
        substream(seed, &[self.dim as u64, self.scale.to_bits(), self.trial as u64])
    }
}

fn unit_hermitian(dim: usize, seed: u64) -> Result<Matrix> {
    let h = random_hermitian(dim, 1.0, seed)?;
    let n = operator_norm(&h)?;
    Ok(h * Complex64::new(1.0 / n, 0.0))
}

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Draws the witness of one trial.
///
/// Self-adjoint experiments use `K` of norm `t` and a base `A` of operator
/// norm `spread * ||K||`, so the spectrum sits around the singular point of
/// the test function at every scale. Unitary experiments localize the same
/// way: `U = e^{i spread t H0}` sits near the point 1 (where the catalog's
/// lacunary series, with positive coefficients, is roughest) and
/// `V = e^{iH} U` with `||H|| = t`. Contraction pairs are `T = (1 - t) U`
/// with `U` localized as above and `R = T + t E` with `||E|| = 1`.
/// Bernstein circle sweeps use Haar `U`.
pub fn sample_witness(p: &PreparedExperiment, key: TrialKey) -> Result<Witness> {
    let seed = key.witness_seed(p.config.seed);
    let (s0, s1) = (substream(seed, &[0]), substream(seed, &[1]));
    let (dim, t) = (key.dim, key.scale);
    let variant = &p.variants[key.variant];
    let spread = p.config.spread;
    use ExperimentId::*;
    match p.id() {
        SelfadjointHolder | Zygmund | SelfadjointHigher | FarforovskayaCompare => {
            let k = random_perturbation(dim, t, None, NormKind::Operator, s1)?;
            let a = unit_hermitian(dim, s0)? * real(spread * t);
            Ok(Witness::SelfAdjoint { a, k })
        }
        Schatten | SchattenHigher => {
            let pv = variant.p.expect("Schatten variants carry p");
            let rank = variant.rank.expect("Schatten variants carry a rank").rank(dim);
            let k = random_perturbation(dim, t, Some(rank), NormKind::Schatten(pv), s1)?;
            let a = unit_hermitian(dim, s0)? * real(spread * operator_norm(&k)?);
            Ok(Witness::SelfAdjoint { a, k })
        }
        Bernstein => match p.config.bernstein_domain() {
            crate::function_space::Domain::Line => {
                let k = random_perturbation(dim, t, None, NormKind::Operator, s1)?;
                let a = unit_hermitian(dim, s0)? * real(spread / variant.weight);
                Ok(Witness::SelfAdjoint { a, k })
            }
            crate::function_space::Domain::Circle => unitary_pair(dim, t, s0, s1),
        },
        UnitaryHolder | UnitaryLipschitzLog | Omega => Ok(Witness::Unitary {
            u: localized_unitary(dim, spread * t, s0)?,
            h: random_perturbation(dim, t, None, NormKind::Operator, s1)?,
        }),
        UnitaryHigher => Ok(Witness::Multiplicative {
            u: localized_unitary(dim, spread * t, s0)?,
            a: random_perturbation(dim, t, None, NormKind::Operator, s1)?,
        }),
        Contraction => {
            let tm = localized_unitary(dim, spread * t, s0)? * real(1.0 - t);
            let e = random_ginibre(dim, s1)?;
            let e = &e * real(t / operator_norm(&e)?);
            Ok(Witness::Contraction { r: &tm + e, t: tm })
        }
    }
}

/// `e^{i r H}` with `||H|| = 1`: a unitary whose spectrum lies within angle
/// `r` of the point 1.
fn localized_unitary(dim: usize, radius: f64, seed: u64) -> Result<Matrix> {
    exp_i_hermitian(&unit_hermitian(dim, seed)?, radius)
}

fn unitary_pair(dim: usize, t: f64, s0: u64, s1: u64) -> Result<Witness> {
    Ok(Witness::Unitary {
        u: random_unitary(dim, s0)?,
        h: random_perturbation(dim, t, None, NormKind::Operator, s1)?,
    })
}

/// Numerator, denominator and ratio of one trial, with the secondary
/// quantities some experiments record.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Evaluation {
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
    /// Measured size of the perturbation entering the bound.
    pub distance: f64,
    /// Strong Schatten ratio `||.||_{S_q} / ...`, when reported.
    pub strong_ratio: Option<f64>,
    /// Whether `||.||_{S_q,inf} <= ||.||_{S_q}` held (Schatten experiments).
    pub weak_le_strong: Option<bool>,
    /// Relative Frobenius gap between the Schur-multiplier and direct
    /// differences (first-order self-adjoint experiments).
    pub doi_rel_error: Option<f64>,
}

impl Evaluation {
    /// `lhs / rhs`; a vanishing perturbation with vanishing difference has
    /// ratio 0.
    fn new(lhs: f64, rhs: f64, distance: f64) -> Result<Self> {
        if distance == 0.0 && lhs == 0.0 {
            return Ok(Evaluation {
                lhs,
                rhs,
                ratio: 0.0,
                distance,
                strong_ratio: None,
                weak_le_strong: None,
                doi_rel_error: None,
            });
        }
        if !(rhs > 0.0 && rhs.is_finite()) || !lhs.is_finite() {
            return Err(degenerate(rhs));
        }
        Ok(Evaluation {
            lhs,
            rhs,
            ratio: lhs / rhs,
            distance,
            strong_ratio: None,
            weak_le_strong: None,
            doi_rel_error: None,
        })
    }
}

pub(crate) const DEGENERATE: &str = "degenerate denominator";

fn degenerate(rhs: f64) -> Error {
    Error::Numeric { message: DEGENERATE.into(), residual: rhs }
}

fn kind_mismatch(id: ExperimentId) -> Error {
    Error::input(format!("witness kind does not match experiment {id}"))
}

fn check_interval(p: &PreparedExperiment, m: &Matrix, which: &str) -> Result<()> {
    let (lo, hi) = p.config.interval;
    let e = eig_hermitian(m)?;
    let offending: Vec<f64> = e.eigenvalues.iter().copied().filter(|&x| x < lo || x > hi).collect();
    if offending.is_empty() {
        Ok(())
    } else {
        Err(Error::domain(format!("spectrum of {which} leaves [{lo}, {hi}]"), offending))
    }
}

/// `||f(A) - f(A + K)||` and the relative gap to the Schur-multiplier form.
fn first_difference(p: &PreparedExperiment, a: &Matrix, k: &Matrix) -> Result<(Matrix, f64)> {
    let b = a + k;
    let f = &p.function;
    let direct = apply_hermitian(f, a)? - apply_hermitian(f, &b)?;
    let doi = doi_first_difference(f, a, &b)?.value;
    let scale = frobenius_norm(&direct);
    let gap = frobenius_norm(&(&doi - &direct));
    let rel = if scale > 0.0 { gap / scale } else { gap };
    Ok((direct, rel))
}

/// Evaluates one witness in one variant of a prepared experiment.
pub fn evaluate_witness(p: &PreparedExperiment, variant: &Variant, w: &Witness) -> Result<Evaluation> {
    let id = p.id();
    let sn = p.normalization.value;
    let alpha = p.alpha;
    let n = p.order;
    use ExperimentId::*;
    match (id, w) {
        (SelfadjointHolder | FarforovskayaCompare, Witness::SelfAdjoint { a, k }) => {
            if id == FarforovskayaCompare {
                check_interval(p, a, "A")?;
                check_interval(p, &(a + k), "B")?;
            }
            let (diff, rel) = first_difference(p, a, k)?;
            let d = operator_norm(k)?;
            let mut e = Evaluation::new(operator_norm(&diff)?, sn * d.powf(alpha), d)?;
            e.doi_rel_error = Some(rel);
            Ok(e)
        }
        (Zygmund, Witness::SelfAdjoint { a, k }) => {
            let second = delta_n(&p.function, &(a - k), k, 2)?;
            let d = operator_norm(k)?;
            Evaluation::new(operator_norm(&second)?, sn * d, d)
        }
        (SelfadjointHigher, Witness::SelfAdjoint { a, k }) => {
            let diff = delta_n(&p.function, a, k, n)?;
            let d = operator_norm(k)?;
            Evaluation::new(operator_norm(&diff)?, sn * d.powf(alpha), d)
        }
        (Schatten | SchattenHigher, Witness::SelfAdjoint { a, k }) => {
            let pv = variant.p.ok_or_else(|| Error::param("Schatten variant without p"))?;
            let diff = if id == Schatten {
                apply_hermitian(&p.function, a)? - apply_hermitian(&p.function, &(a + k))?
            } else {
                delta_n(&p.function, a, k, n)?
            };
            let q = pv / alpha;
            let s = singular_values(&diff)?;
            let weak = s.weak_schatten(q)?;
            let strong = s.schatten(q)?;
            let d = singular_values(k)?.schatten(pv)?;
            let rhs = sn * d.powf(alpha);
            let mut e = Evaluation::new(weak, rhs, d)?;
            if variant.strong {
                e.strong_ratio = Some(strong / rhs);
            }
            e.weak_le_strong = Some(weak <= strong * (1.0 + 1e-12));
            Ok(e)
        }
        (Bernstein, Witness::SelfAdjoint { a, k }) => {
            let f = variant.function.as_ref().ok_or_else(|| Error::param("Bernstein variant without function"))?;
            let diff = apply_hermitian(f, a)? - apply_hermitian(f, &(a + k))?;
            let d = operator_norm(k)?;
            Evaluation::new(operator_norm(&diff)?, variant.bound_factor * d, d)
        }
        (Bernstein, Witness::Unitary { u, h }) => {
            let f = variant.function.as_ref().ok_or_else(|| Error::param("Bernstein variant without function"))?;
            let v = exp_i_hermitian(h, 1.0)? * u;
            let diff = apply_unitary(f, u)? - apply_unitary(f, &v)?;
            let d = operator_norm(&(u - &v))?;
            Evaluation::new(operator_norm(&diff)?, variant.bound_factor * d, d)
        }
        (UnitaryHolder | UnitaryLipschitzLog | Omega, Witness::Unitary { u, h }) => {
            let mut h = h.clone();
            let (v, d) = loop {
                let v = exp_i_hermitian(&h, 1.0)? * u;
                let d = operator_norm(&(u - &v))?;
                // the log-factor bound is stated for ||U - V|| < 1
                if id == UnitaryLipschitzLog && d >= 1.0 && d.is_finite() {
                    h *= real(0.5);
                    continue;
                }
                break (v, d);
            };
            if d == 0.0 && id != UnitaryHolder {
                return Err(degenerate(0.0));
            }
            let lhs = operator_norm(&(apply_unitary(&p.function, u)? - apply_unitary(&p.function, &v)?))?;
            let rhs = match id {
                UnitaryHolder => sn * d.powf(alpha),
                UnitaryLipschitzLog => sn * (2.0 + (1.0 / d).log2()) * d,
                _ => {
                    let w = p.modulus.as_ref().ok_or_else(|| Error::param("omega experiment without modulus"))?;
                    sn * omega_star(w, d)?
                }
            };
            Evaluation::new(lhs, rhs, d)
        }
        (UnitaryHigher, Witness::Multiplicative { u, a }) => {
            let diff = unitary_multiplicative_differences(&p.function, u, a, n)?;
            let d = operator_norm(a)?;
            Evaluation::new(operator_norm(&diff)?, sn * d.powf(alpha), d)
        }
        (Contraction, Witness::Contraction { t, r }) => {
            let diff = contraction_differences(p.polynomial(), t, r, n, p.config.mode)?;
            let d = operator_norm(&(t - r))?;
            Evaluation::new(operator_norm(&diff)?, sn * d.powf(alpha), d)
        }
        _ => Err(kind_mismatch(id)),
    }
}

// ---- parameterization for the adversarial search ----

fn hermitian_params(m: &Matrix, out: &mut Vec<f64>) {
    let n = m.nrows();
    for i in 0..n {
        out.push(m[(i, i)].re);
        for j in (i + 1)..n {
            out.push(m[(i, j)].re);
            out.push(m[(i, j)].im);
        }
    }
}

fn hermitian_from(n: usize, params: &[f64]) -> Matrix {
    let mut m = Matrix::zeros(n, n);
    let mut it = params.iter();
    for i in 0..n {
        m[(i, i)] = real(*it.next().expect("parameter count"));
        for j in (i + 1)..n {
            let z = Complex64::new(*it.next().expect("parameter count"), *it.next().expect("parameter count"));
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    m
}

fn general_params(m: &Matrix, out: &mut Vec<f64>) {
    for z in m.iter() {
        out.push(z.re);
        out.push(z.im);
    }
}

fn general_from(n: usize, params: &[f64]) -> Matrix {
    Matrix::from_iterator(n, n, params.chunks(2).map(|c| Complex64::new(c[0], c[1])))
}

fn rescaled(m: Matrix, kind: NormKind, target: f64) -> Result<Matrix> {
    let now = kind.of(&m)?;
    if !(now > 0.0) {
        return Err(Error::Numeric { message: "perturbation collapsed to zero".into(), residual: now });
    }
    Ok(m * real(target / now))
}

impl Witness {
    pub fn dim(&self) -> usize {
        match self {
            Witness::SelfAdjoint { a, .. } => a.nrows(),
            Witness::Unitary { u, .. } | Witness::Multiplicative { u, .. } => u.nrows(),
            Witness::Contraction { t, .. } => t.nrows(),
        }
    }

    /// Free real parameters: the entries of `A` and `K` for self-adjoint
    /// pairs, of `H` or `A` for unitary pairs, and of `R - T` for contractions.
    pub fn params(&self) -> Vec<f64> {
        let mut out = Vec::new();
        match self {
            Witness::SelfAdjoint { a, k } => {
                hermitian_params(a, &mut out);
                hermitian_params(k, &mut out);
            }
            Witness::Unitary { h, .. } => hermitian_params(h, &mut out),
            Witness::Multiplicative { a, .. } => hermitian_params(a, &mut out),
            Witness::Contraction { t, r } => general_params(&(r - t), &mut out),
        }
        out
    }

    /// Rebuilds the witness from perturbed parameters, rescaling the
    /// perturbation back to the size it had in `self` (in `kind`).
    pub fn with_params(&self, params: &[f64], kind: NormKind) -> Result<Witness> {
        let n = self.dim();
        match self {
            Witness::SelfAdjoint { k, .. } => {
                let half = n * n;
                let a = hermitian_from(n, &params[..half]);
                let k2 = rescaled(hermitian_from(n, &params[half..]), kind, kind.of(k)?)?;
                Ok(Witness::SelfAdjoint { a, k: k2 })
            }
            Witness::Unitary { u, h } => Ok(Witness::Unitary {
                u: u.clone(),
                h: rescaled(hermitian_from(n, params), NormKind::Operator, operator_norm(h)?)?,
            }),
            Witness::Multiplicative { u, a } => Ok(Witness::Multiplicative {
                u: u.clone(),
                a: rescaled(hermitian_from(n, params), NormKind::Operator, operator_norm(a)?)?,
            }),
            Witness::Contraction { t, r } => {
                let e = rescaled(general_from(n, params), NormKind::Operator, operator_norm(&(r - t))?)?;
                Ok(Witness::Contraction { r: t + e, t: t.clone() })
            }
        }
    }
}

/// Norm in which a variant's perturbation size is measured.
pub(crate) fn perturbation_norm(variant: &Variant) -> NormKind {
    match variant.p {
        Some(p) => NormKind::Schatten(p),
        None => NormKind::Operator,
    }
}
