//! Hermitian eigendecomposition via cyclic Jacobi rotations.
//!
//! Each rotation is a complex plane rotation chosen to annihilate one
//! off-diagonal entry; the off-diagonal Frobenius mass decreases monotonically
//! so the sweep loop converges for every Hermitian input. Self-contained and
//! accurate enough at the dimensions this crate targets (d <= 64).

use num_complex::Complex64;

use super::matrix::{GeneralMatrix, HermitianMatrix};
use super::AlgebraError;

/// Sweep cap for the cyclic Jacobi iteration.
const MAX_SWEEPS: usize = 100;
/// Convergence threshold factor on the off-diagonal Frobenius norm.
const OFF_TOL: f64 = 1e-12;

/// Eigendecomposition `x = basis . diag(eigenvalues) . basis*` with
/// eigenvalues ascending and `basis` unitary (columns are eigenvectors).
#[derive(Debug, Clone)]
pub struct Eigh {
    pub eigenvalues: Vec<f64>,
    pub basis: GeneralMatrix,
}

impl Eigh {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn min_eig(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max_eig(&self) -> f64 {
        *self.eigenvalues.last().unwrap()
    }

    /// Largest absolute eigenvalue.
    pub fn spectral_norm(&self) -> f64 {
        self.eigenvalues.iter().map(|l| l.abs()).fold(0.0, f64::max)
    }

    /// `basis . diag(f(eigenvalue)) . basis*`.
    pub fn apply(&self, f: impl Fn(f64) -> f64) -> HermitianMatrix {
        self.weighted_gram(&self.eigenvalues.iter().map(|&l| f(l)).collect::<Vec<_>>())
    }

    /// Functional calculus on the support only: eigenvalues at or below
    /// `support_tol` contribute nothing (their image is set to zero).
    pub fn apply_on_support(&self, f: impl Fn(f64) -> f64, support_tol: f64) -> HermitianMatrix {
        let vals: Vec<f64> = self
            .eigenvalues
            .iter()
            .map(|&l| if l > support_tol { f(l) } else { 0.0 })
            .collect();
        self.weighted_gram(&vals)
    }

    pub fn reconstruct(&self) -> HermitianMatrix {
        self.weighted_gram(&self.eigenvalues)
    }

    /// `sum_i w_i v_i v_i*` over eigenvector columns `v_i`.
    fn weighted_gram(&self, weights: &[f64]) -> HermitianMatrix {
        let d = self.dim();
        let mut out = GeneralMatrix::zero(d);
        for (k, &w) in weights.iter().enumerate() {
            if w == 0.0 {
                continue;
            }
            for i in 0..d {
                let vik = self.basis.get(i, k).scale(w);
                for j in 0..d {
                    let add = vik * self.basis.get(j, k).conj();
                    out.set(i, j, out.get(i, j) + add);
                }
            }
        }
        HermitianMatrix::symmetrized(&out)
    }

    /// `max |(V* V - I)[i][j]|`, for diagnostics and tests.
    pub fn unitary_defect(&self) -> f64 {
        let d = self.dim();
        let gram = &self.basis.adjoint() * &self.basis;
        let mut worst = 0.0f64;
        for i in 0..d {
            for j in 0..d {
                let expect = if i == j { Complex64::ONE } else { Complex64::ZERO };
                worst = worst.max((gram.get(i, j) - expect).norm());
            }
        }
        worst
    }
}

fn off_diag_frobenius(a: &GeneralMatrix) -> f64 {
    let d = a.dim();
    let mut sum = 0.0;
    for i in 0..d {
        for j in 0..d {
            if i != j {
                sum += a.get(i, j).norm_sqr();
            }
        }
    }
    sum.sqrt()
}

/// Eigendecomposition of a Hermitian matrix.
pub fn eigh(x: &HermitianMatrix) -> Result<Eigh, AlgebraError> {
    let d = x.dim();
    let mut a = x.to_general();
    let mut v = GeneralMatrix::identity(d);

    if d == 1 {
        return Ok(Eigh { eigenvalues: vec![a.get(0, 0).re], basis: v });
    }

    let frob = x.frobenius_norm();
    let tol = OFF_TOL * frob;
    // Entries this small cannot affect convergence but would make the
    // rotation angle computation degenerate.
    let skip = (tol / ((d * d) as f64)).max(f64::MIN_POSITIVE) * 1e-3;

    for _ in 0..MAX_SWEEPS {
        if off_diag_frobenius(&a) <= tol {
            return Ok(finish(a, v));
        }
        for p in 0..d - 1 {
            for q in (p + 1)..d {
                let beta = a.get(p, q);
                let beta_abs = beta.norm();
                if beta_abs <= skip {
                    continue;
                }
                let phase = beta.scale(1.0 / beta_abs);
                let alpha = a.get(p, p).re;
                let gamma = a.get(q, q).re;
                // tan of the rotation angle: smaller-magnitude root of
                // t^2 - 2*theta*t - 1 = 0 with theta = (gamma - alpha) / (2|beta|).
                let theta = (gamma - alpha) / (2.0 * beta_abs);
                let t = if theta == 0.0 {
                    1.0
                } else {
                    let r = theta.abs() + (theta * theta + 1.0).sqrt();
                    -theta.signum() / r
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                let s_ph = phase.scale(s);
                // Rows p, q of U* A.
                for j in 0..d {
                    let apj = a.get(p, j);
                    let aqj = a.get(q, j);
                    a.set(p, j, apj.scale(c) + s_ph * aqj);
                    a.set(q, j, aqj.scale(c) - s_ph.conj() * apj);
                }
                // Columns p, q of (U* A) U.
                for i in 0..d {
                    let aip = a.get(i, p);
                    let aiq = a.get(i, q);
                    a.set(i, p, aip.scale(c) + s_ph.conj() * aiq);
                    a.set(i, q, aiq.scale(c) - s_ph * aip);
                }
                // Accumulate V <- V U.
                for i in 0..d {
                    let vip = v.get(i, p);
                    let viq = v.get(i, q);
                    v.set(i, p, vip.scale(c) + s_ph.conj() * viq);
                    v.set(i, q, viq.scale(c) - s_ph * vip);
                }
                // Pivot is now annihilated up to rounding.
                a.set(p, q, Complex64::ZERO);
                a.set(q, p, Complex64::ZERO);
            }
        }
    }

    if off_diag_frobenius(&a) <= tol {
        return Ok(finish(a, v));
    }
    Err(AlgebraError::ConvergenceFailure { sweeps: MAX_SWEEPS })
}

/// Sort eigenvalues ascending and permute eigenvector columns to match.
fn finish(a: GeneralMatrix, v: GeneralMatrix) -> Eigh {
    let d = a.dim();
    let mut order: Vec<usize> = (0..d).collect();
    let lambdas: Vec<f64> = (0..d).map(|i| a.get(i, i).re).collect();
    order.sort_by(|&i, &j| lambdas[i].partial_cmp(&lambdas[j]).unwrap().then(i.cmp(&j)));

    let eigenvalues: Vec<f64> = order.iter().map(|&i| lambdas[i]).collect();
    let mut basis = GeneralMatrix::zero(d);
    for (new_col, &old_col) in order.iter().enumerate() {
        for i in 0..d {
            basis.set(i, new_col, v.get(i, old_col));
        }
    }
    Eigh { eigenvalues, basis }
}

/// Largest absolute eigenvalue of a Hermitian matrix.
pub fn spectral_norm(x: &HermitianMatrix) -> Result<f64, AlgebraError> {
    Ok(eigh(x)?.spectral_norm())
}
