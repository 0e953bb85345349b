//! Domain types: positivity certificates, the normalized trace, and
//! exponents with their regime bookkeeping.

use super::eigh::eigh;
use super::matrix::{GeneralMatrix, HermitianMatrix};
use super::AlgebraError;

/// Relative tolerance for the numerical PSD certificate.
pub const PSD_TOL: f64 = 1e-10;

/// Hermitian matrix certified positive semidefinite at construction; the
/// smallest eigenvalue found by the certificate is cached.
#[derive(Debug, Clone)]
pub struct PositiveOperator {
    base: HermitianMatrix,
    min_eig: f64,
}

impl PositiveOperator {
    /// Certifies `h >= 0` numerically: the smallest eigenvalue must be at
    /// least `-PSD_TOL * spectral_norm(h)`.
    pub fn new(base: HermitianMatrix) -> Result<Self, AlgebraError> {
        let e = eigh(&base)?;
        let min_eig = e.min_eig();
        let tol = PSD_TOL * e.spectral_norm();
        if min_eig < -tol {
            return Err(AlgebraError::NotPositive { min_eig, tol });
        }
        Ok(Self { base, min_eig })
    }

    /// `g g*`, positive by construction.
    pub fn from_factor(g: &GeneralMatrix) -> Result<Self, AlgebraError> {
        Self::new((g * &g.adjoint()).hermitian_part())
    }

    pub fn matrix(&self) -> &HermitianMatrix {
        &self.base
    }

    pub fn into_matrix(self) -> HermitianMatrix {
        self.base
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    pub fn min_eig(&self) -> f64 {
        self.min_eig
    }
}

/// Normalized trace `tau = Tr / d` on the `d x d` matrix algebra, so that
/// `tau(1) = 1` exactly.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TraceContext {
    dim: usize,
}

impl TraceContext {
    pub fn new(dim: usize) -> Result<Self, AlgebraError> {
        if dim == 0 {
            return Err(AlgebraError::BadDimension { dim });
        }
        Ok(Self { dim })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn normalization(&self) -> f64 {
        1.0 / self.dim as f64
    }

    /// `tau(x)` for Hermitian `x` (real by symmetry).
    pub fn tau(&self, x: &HermitianMatrix) -> f64 {
        debug_assert_eq!(x.dim(), self.dim);
        x.trace_re() * self.normalization()
    }

    /// `tau(x y)` for Hermitian factors. The result is real in exact
    /// arithmetic; the real part is returned.
    pub fn tau_product(&self, x: &HermitianMatrix, y: &HermitianMatrix) -> f64 {
        debug_assert_eq!(x.dim(), self.dim);
        debug_assert_eq!(y.dim(), self.dim);
        let d = self.dim;
        let mut sum = 0.0;
        for i in 0..d {
            for k in 0..d {
                // Tr(xy) = sum_{i,k} x[i][k] y[k][i]; keep the real part.
                let prod = x.get(i, k) * y.get(k, i);
                sum += prod.re;
            }
        }
        sum * self.normalization()
    }
}

/// Exponent regime: quasi-norm for `p < 1`, norm for `p >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PRegime {
    Quasi,
    Banach,
}

/// A positive exponent `p` with its regime and, for `p > 1`, the conjugate
/// exponent `p' = p / (p - 1)` (so `1/p + 1/p' = 1`). `p = infinity` is
/// allowed and has conjugate 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PExponent {
    p: f64,
}

impl PExponent {
    pub fn new(p: f64) -> Result<Self, AlgebraError> {
        if p.is_nan() || p <= 0.0 {
            return Err(AlgebraError::InvalidExponent { p });
        }
        Ok(Self { p })
    }

    pub fn value(&self) -> f64 {
        self.p
    }

    pub fn is_infinite(&self) -> bool {
        self.p.is_infinite()
    }

    pub fn regime(&self) -> PRegime {
        if self.p < 1.0 { PRegime::Quasi } else { PRegime::Banach }
    }

    /// Conjugate exponent, defined only for `p > 1`.
    pub fn conjugate(&self) -> Option<f64> {
        if self.p.is_infinite() {
            Some(1.0)
        } else if self.p > 1.0 {
            Some(self.p / (self.p - 1.0))
        } else {
            None
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trace_of_identity_is_one() {
        for d in [1, 2, 7] {
            let ctx = TraceContext::new(d).unwrap();
            assert_eq!(ctx.tau(&HermitianMatrix::identity(d)), 1.0);
        }
    }

    #[test]
    fn conjugate_exponent_identity() {
        for p in [1.5, 2.0, 3.0, 64.0] {
            let e = PExponent::new(p).unwrap();
            let q = e.conjugate().unwrap();
            assert!((1.0 / p + 1.0 / q - 1.0).abs() < 1e-14);
        }
        assert_eq!(PExponent::new(f64::INFINITY).unwrap().conjugate(), Some(1.0));
        assert_eq!(PExponent::new(0.5).unwrap().conjugate(), None);
        assert_eq!(PExponent::new(0.5).unwrap().regime(), PRegime::Quasi);
        assert!(PExponent::new(0.0).is_err());
        assert!(PExponent::new(-1.0).is_err());
    }

    #[test]
    fn positivity_certificate() {
        assert!(PositiveOperator::new(HermitianMatrix::diag(&[1.0, 0.0])).is_ok());
        let err = PositiveOperator::new(HermitianMatrix::diag(&[1.0, -0.5])).unwrap_err();
        assert!(matches!(err, AlgebraError::NotPositive { .. }));
    }

    #[test]
    fn tau_product_matches_direct_trace() {
        let ctx = TraceContext::new(2).unwrap();
        let x = HermitianMatrix::from_real(2, &[&[1.0, 2.0], &[2.0, -1.0]]).unwrap();
        let y = HermitianMatrix::from_real(2, &[&[0.5, 0.0], &[0.0, 3.0]]).unwrap();
        // Tr(xy) = 0.5 * 1 + 3 * (-1) + cross terms 0 on the diagonal of xy:
        // xy = [[0.5, 6], [1, -3]], trace -2.5, tau = -1.25.
        assert!((ctx.tau_product(&x, &y) - (-1.25)).abs() < 1e-14);
    }
}
