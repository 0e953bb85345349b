//! Functional calculus, Schatten p-(quasi-)norms and the Loewner order.

use super::eigh::eigh;
use super::matrix::HermitianMatrix;
use super::types::{PExponent, PositiveOperator, TraceContext};
use super::AlgebraError;

/// Default factor for the support cutoff of singular inputs: eigenvalues at
/// or below `factor * lambda_max` are treated as outside the support
/// (pseudo-inverse convention).
pub const SUPPORT_TOL_FACTOR: f64 = 1e-12;

/// Spectral transform `f(x)` of a positive operator, evaluated on the support
/// only: eigenvalues at or below `support_tol` contribute nothing. Negative
/// eigenvalues from rounding are clamped to zero before applying `f`.
pub fn func_calc(
    x: &PositiveOperator,
    f: impl Fn(f64) -> f64,
    support_tol: f64,
) -> Result<HermitianMatrix, AlgebraError> {
    let e = eigh(x.matrix())?;
    Ok(e.apply_on_support(|l| f(l.max(0.0)), support_tol))
}

/// `x^r` for a positive operator, with the pseudo-inverse convention for
/// `r < 0` and the support projection for `r = 0`. The default support
/// cutoff (`support_tol = None`) is `SUPPORT_TOL_FACTOR * lambda_max`.
///
/// Errors with `SingularPower` when a negative power is requested and the
/// whole spectrum falls below the cutoff.
pub fn power(
    x: &PositiveOperator,
    r: f64,
    support_tol: Option<f64>,
) -> Result<HermitianMatrix, AlgebraError> {
    let e = eigh(x.matrix())?;
    let tol = support_tol
        .unwrap_or_else(|| SUPPORT_TOL_FACTOR * e.max_eig().max(0.0))
        .max(0.0);
    if r < 0.0 && e.eigenvalues.iter().all(|&l| l <= tol) {
        return Err(AlgebraError::SingularPower { support_tol: tol });
    }
    Ok(e.apply_on_support(|l| l.powf(r), tol))
}

/// Schatten p-(quasi-)norm with the normalized trace:
/// `(tau(|x|^p))^(1/p) = (sum |lambda_i|^p / d)^(1/p)`; the spectral norm for
/// `p = infinity`.
pub fn schatten(
    x: &HermitianMatrix,
    ctx: &TraceContext,
    p: &PExponent,
) -> Result<f64, AlgebraError> {
    if x.dim() != ctx.dim() {
        return Err(AlgebraError::DimensionMismatch { left: x.dim(), right: ctx.dim() });
    }
    let e = eigh(x)?;
    if p.is_infinite() {
        return Ok(e.spectral_norm());
    }
    let p = p.value();
    let sum: f64 = e.eigenvalues.iter().map(|l| l.abs().powf(p)).sum();
    Ok((sum * ctx.normalization()).powf(1.0 / p))
}

/// Loewner order check `a <= b`: holds iff the smallest eigenvalue of
/// `b - a` is at least `-tol * (1 + spectral_norm(b))`. The smallest
/// eigenvalue of the gap is always reported.
pub fn loewner_leq(
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    tol: f64,
) -> Result<(bool, f64), AlgebraError> {
    if a.dim() != b.dim() {
        return Err(AlgebraError::DimensionMismatch { left: a.dim(), right: b.dim() });
    }
    let gap = eigh(&b.sub(a))?;
    let min_gap_eig = gap.min_eig();
    let scale = eigh(b)?.spectral_norm();
    Ok((min_gap_eig >= -tol * (1.0 + scale), min_gap_eig))
}

/// Cholesky factor `x = L L*` of a positive definite Hermitian matrix.
/// Decomposition failure is the cheapest reliable positive-definiteness
/// test, and the factor gives log-determinants and inverses at a fraction
/// of an eigendecomposition's cost.
pub struct Cholesky {
    dim: usize,
    l: Vec<num_complex::Complex64>, // lower triangular, row-major
}

impl Cholesky {
    /// Attempts the factorization of `x - shift * I`; `None` when the matrix
    /// is not (numerically) positive definite.
    pub fn decompose(x: &HermitianMatrix, shift: f64) -> Option<Self> {
        use num_complex::Complex64;
        let d = x.dim();
        let mut l = vec![Complex64::ZERO; d * d];
        for j in 0..d {
            let mut diag = x.get(j, j).re - shift;
            for k in 0..j {
                diag -= l[j * d + k].norm_sqr();
            }
            if !(diag > 0.0) || !diag.is_finite() {
                return None;
            }
            let root = diag.sqrt();
            l[j * d + j] = Complex64::new(root, 0.0);
            for i in (j + 1)..d {
                let mut v = x.get(i, j);
                for k in 0..j {
                    v -= l[i * d + k] * l[j * d + k].conj();
                }
                l[i * d + j] = v.scale(1.0 / root);
            }
        }
        Some(Self { dim: d, l })
    }

    pub fn log_det(&self) -> f64 {
        let d = self.dim;
        (0..d).map(|i| self.l[i * d + i].re.ln()).sum::<f64>() * 2.0
    }

    /// `(L L*)^{-1}` via forward and back substitution.
    pub fn inverse(&self) -> HermitianMatrix {
        use num_complex::Complex64;
        let d = self.dim;
        // Forward: L Y = I.
        let mut y = vec![Complex64::ZERO; d * d];
        for col in 0..d {
            for i in 0..d {
                let mut v = if i == col { Complex64::ONE } else { Complex64::ZERO };
                for k in 0..i {
                    v -= self.l[i * d + k] * y[k * d + col];
                }
                y[i * d + col] = v.scale(1.0 / self.l[i * d + i].re);
            }
        }
        // Backward: L* Z = Y.
        let mut z = vec![Complex64::ZERO; d * d];
        for col in 0..d {
            for i in (0..d).rev() {
                let mut v = y[i * d + col];
                for k in (i + 1)..d {
                    v -= self.l[k * d + i].conj() * z[k * d + col];
                }
                z[i * d + col] = v.scale(1.0 / self.l[i * d + i].re);
            }
        }
        let g = super::matrix::GeneralMatrix::new(d, z).expect("square buffer");
        HermitianMatrix::symmetrized(&g)
    }
}

/// Positive-definiteness of `x - shift * I` via attempted factorization.
pub fn is_positive_definite(x: &HermitianMatrix, shift: f64) -> bool {
    Cholesky::decompose(x, shift).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pos(values: &[f64]) -> PositiveOperator {
        PositiveOperator::new(HermitianMatrix::diag(values)).unwrap()
    }

    #[test]
    fn sqrt_of_diagonal() {
        let y = func_calc(&pos(&[4.0, 9.0]), f64::sqrt, 0.0).unwrap();
        assert!((y.get(0, 0).re - 2.0).abs() < 1e-14);
        assert!((y.get(1, 1).re - 3.0).abs() < 1e-14);
    }

    #[test]
    fn identity_is_fixed_by_powers() {
        for p in [0.25, 0.5, 1.0, 1.7, 3.0] {
            let y = power(&pos(&[1.0, 1.0, 1.0]), p - 1.0, None).unwrap();
            let defect = y.sub(&HermitianMatrix::identity(3)).frobenius_norm();
            assert!(defect < 1e-13, "p = {p}");
        }
    }

    #[test]
    fn pseudo_inverse_convention() {
        // diag(2, 0) at exponent -1/2 keeps the kernel at zero.
        let y = power(&pos(&[2.0, 0.0]), -0.5, Some(1e-12)).unwrap();
        assert!((y.get(0, 0).re - 2.0f64.powf(-0.5)).abs() < 1e-14);
        assert!(y.get(1, 1).norm() < 1e-14);
    }

    #[test]
    fn singular_negative_power_errors() {
        let err = power(&pos(&[0.0, 0.0]), -1.0, Some(1e-12)).unwrap_err();
        assert!(matches!(err, AlgebraError::SingularPower { .. }));
    }

    #[test]
    fn schatten_values() {
        let ctx = TraceContext::new(2).unwrap();
        // ||I||_p = 1 for all p since tau(1) = 1.
        for p in [0.25, 0.5, 1.0, 2.0, 7.0] {
            let p = PExponent::new(p).unwrap();
            let n = schatten(&HermitianMatrix::identity(2), &ctx, &p).unwrap();
            assert!((n - 1.0).abs() < 1e-13, "p = {:?}", p.value());
        }
        // ||diag(3,1)||_1 = (3 + 1)/2 = 2.
        let one = PExponent::new(1.0).unwrap();
        let n = schatten(&HermitianMatrix::diag(&[3.0, 1.0]), &ctx, &one).unwrap();
        assert!((n - 2.0).abs() < 1e-13);
        // ||diag(1,0)||_{1/2} = (tau(x^{1/2}))^2 = (1/2)^2 = 1/4.
        let half = PExponent::new(0.5).unwrap();
        let n = schatten(&HermitianMatrix::diag(&[1.0, 0.0]), &ctx, &half).unwrap();
        assert!((n - 0.25).abs() < 1e-13);
        // p = infinity gives the spectral norm.
        let inf = PExponent::new(f64::INFINITY).unwrap();
        let n = schatten(&HermitianMatrix::diag(&[-3.0, 1.0]), &ctx, &inf).unwrap();
        assert!((n - 3.0).abs() < 1e-14);
    }

    #[test]
    fn schatten_positive_homogeneity() {
        let ctx = TraceContext::new(3).unwrap();
        let x = HermitianMatrix::diag(&[0.3, 1.5, 2.0]);
        for p in [0.5, 1.0, 3.0] {
            let p = PExponent::new(p).unwrap();
            let base = schatten(&x, &ctx, &p).unwrap();
            let scaled = schatten(&x.scale(4.0), &ctx, &p).unwrap();
            assert!((scaled - 4.0 * base).abs() < 1e-12 * (1.0 + scaled));
        }
    }

    #[test]
    fn loewner_examples() {
        let i = HermitianMatrix::identity(2);
        let two_i = i.scale(2.0);
        let (holds, gap) = loewner_leq(&i, &two_i, 1e-12).unwrap();
        assert!(holds);
        assert!((gap - 1.0).abs() < 1e-13);

        let a = HermitianMatrix::diag(&[2.0, 0.0]);
        let b = HermitianMatrix::diag(&[1.0, 1.0]);
        let (holds, gap) = loewner_leq(&a, &b, 1e-12).unwrap();
        assert!(!holds);
        assert!((gap - (-1.0)).abs() < 1e-13);

        let (holds, gap) = loewner_leq(&a, &a, 1e-12).unwrap();
        assert!(holds);
        assert!(gap.abs() < 1e-14);
    }

    #[test]
    fn cholesky_check_matches_eigenvalues() {
        let x = HermitianMatrix::from_real(2, &[&[2.0, 1.0], &[1.0, 2.0]]).unwrap();
        assert!(is_positive_definite(&x, 0.0));
        assert!(is_positive_definite(&x, 0.5)); // min eig is 1
        assert!(!is_positive_definite(&x, 1.5));
    }

    #[test]
    fn cholesky_logdet_and_inverse() {
        let x = HermitianMatrix::from_real(2, &[&[2.0, 1.0], &[1.0, 2.0]]).unwrap();
        let chol = Cholesky::decompose(&x, 0.0).unwrap();
        // det = 3, eigenvalues 1 and 3.
        assert!((chol.log_det() - 3.0f64.ln()).abs() < 1e-12);
        let inv = chol.inverse();
        let prod = &x.to_general() * inv.as_general();
        let defect = (&prod - &crate::algebra::GeneralMatrix::identity(2)).frobenius_norm();
        assert!(defect < 1e-12, "defect {defect}");
    }
}
