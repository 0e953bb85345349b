//! Dense complex matrices: a general (unconstrained) type and a Hermitian
//! wrapper whose constructor symmetrizes and certifies the symmetry.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use super::AlgebraError;

/// Dense `d x d` complex matrix, row-major. This is the workhorse for
/// products and adjoints; no structural constraints are imposed.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneralMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl GeneralMatrix {
    pub fn new(dim: usize, entries: Vec<Complex64>) -> Result<Self, AlgebraError> {
        if dim == 0 {
            return Err(AlgebraError::BadDimension { dim });
        }
        if entries.len() != dim * dim {
            return Err(AlgebraError::BadEntryCount { dim, len: entries.len() });
        }
        Ok(Self { dim, entries })
    }

    pub fn zero(dim: usize) -> Self {
        Self { dim, entries: vec![Complex64::ZERO; dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zero(dim);
        for i in 0..dim {
            m.entries[i * dim + i] = Complex64::ONE;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.entries[i * self.dim + j] = v;
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let d = self.dim;
        let mut out = Self::zero(d);
        for i in 0..d {
            for j in 0..d {
                out.entries[j * d + i] = self.entries[i * d + j].conj();
            }
        }
        out
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self { dim: self.dim, entries: self.entries.iter().map(|z| z * s).collect() }
    }

    pub fn scale_re(&self, s: f64) -> Self {
        self.scale(Complex64::new(s, 0.0))
    }

    /// Unnormalized trace `Tr`.
    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.entries[i * self.dim + i]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest deviation of `self` from its own adjoint, entrywise.
    pub fn hermitian_defect(&self) -> f64 {
        let d = self.dim;
        let mut worst = 0.0f64;
        for i in 0..d {
            for j in i..d {
                let diff = self.entries[i * d + j] - self.entries[j * d + i].conj();
                worst = worst.max(diff.norm());
            }
        }
        worst
    }

    /// `(self + self*) / 2`.
    pub fn hermitian_part(&self) -> HermitianMatrix {
        HermitianMatrix::symmetrized(self)
    }

    /// `self* . self`, always positive semidefinite.
    pub fn abs_squared(&self) -> HermitianMatrix {
        (&self.adjoint() * self).hermitian_part()
    }
}

impl Add for &GeneralMatrix {
    type Output = GeneralMatrix;
    fn add(self, rhs: &GeneralMatrix) -> GeneralMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix dims must match");
        GeneralMatrix {
            dim: self.dim,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &GeneralMatrix {
    type Output = GeneralMatrix;
    fn sub(self, rhs: &GeneralMatrix) -> GeneralMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix dims must match");
        GeneralMatrix {
            dim: self.dim,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &GeneralMatrix {
    type Output = GeneralMatrix;
    fn neg(self) -> GeneralMatrix {
        self.scale_re(-1.0)
    }
}

impl Mul for &GeneralMatrix {
    type Output = GeneralMatrix;
    fn mul(self, rhs: &GeneralMatrix) -> GeneralMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix dims must match");
        let d = self.dim;
        let mut out = GeneralMatrix::zero(d);
        for i in 0..d {
            for k in 0..d {
                let aik = self.entries[i * d + k];
                if aik == Complex64::ZERO {
                    continue;
                }
                for j in 0..d {
                    out.entries[i * d + j] += aik * rhs.entries[k * d + j];
                }
            }
        }
        out
    }
}

/// Complex square matrix with Hermitian symmetry. The constructor checks the
/// symmetry defect against an absolute tolerance scaled by the entry
/// magnitude and then replaces the input by `(X + X*) / 2`, so stored entries
/// satisfy `x[i][j] == conj(x[j][i])` exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    inner: GeneralMatrix,
}

/// Relative factor for the constructor's symmetry check.
pub const HERMITIAN_TOL: f64 = 1e-12;

impl HermitianMatrix {
    /// Validated constructor: rejects inputs whose symmetry defect exceeds
    /// `HERMITIAN_TOL * (1 + max |entry|)`, symmetrizes otherwise.
    pub fn new(dim: usize, entries: Vec<Complex64>) -> Result<Self, AlgebraError> {
        let g = GeneralMatrix::new(dim, entries)?;
        let defect = g.hermitian_defect();
        let tol = HERMITIAN_TOL * (1.0 + g.max_abs_entry());
        if defect > tol {
            return Err(AlgebraError::NonHermitianInput { defect, tol });
        }
        Ok(Self::symmetrized(&g))
    }

    /// Unconditional symmetrization, for products that are Hermitian up to
    /// rounding (e.g. `z* z`, `u f(d) u*`).
    pub fn symmetrized(g: &GeneralMatrix) -> Self {
        let d = g.dim;
        let mut out = GeneralMatrix::zero(d);
        for i in 0..d {
            out.entries[i * d + i] = Complex64::new(g.entries[i * d + i].re, 0.0);
            for j in (i + 1)..d {
                let v = (g.entries[i * d + j] + g.entries[j * d + i].conj()) * 0.5;
                out.entries[i * d + j] = v;
                out.entries[j * d + i] = v.conj();
            }
        }
        Self { inner: out }
    }

    /// Real matrix interpreted as Hermitian (symmetrizing if needed).
    pub fn from_real(dim: usize, rows: &[&[f64]]) -> Result<Self, AlgebraError> {
        let mut entries = Vec::with_capacity(dim * dim);
        if rows.len() != dim {
            return Err(AlgebraError::BadEntryCount { dim, len: rows.len() * dim });
        }
        for row in rows {
            if row.len() != dim {
                return Err(AlgebraError::BadEntryCount { dim, len: row.len() });
            }
            entries.extend(row.iter().map(|&x| Complex64::new(x, 0.0)));
        }
        Self::new(dim, entries)
    }

    pub fn diag(values: &[f64]) -> Self {
        let d = values.len();
        let mut g = GeneralMatrix::zero(d);
        for (i, &v) in values.iter().enumerate() {
            g.entries[i * d + i] = Complex64::new(v, 0.0);
        }
        Self { inner: g }
    }

    pub fn zero(dim: usize) -> Self {
        Self { inner: GeneralMatrix::zero(dim) }
    }

    pub fn identity(dim: usize) -> Self {
        Self { inner: GeneralMatrix::identity(dim) }
    }

    pub fn dim(&self) -> usize {
        self.inner.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.inner.get(i, j)
    }

    pub fn as_general(&self) -> &GeneralMatrix {
        &self.inner
    }

    pub fn to_general(&self) -> GeneralMatrix {
        self.inner.clone()
    }

    pub fn add(&self, rhs: &HermitianMatrix) -> HermitianMatrix {
        HermitianMatrix { inner: &self.inner + &rhs.inner }
    }

    pub fn sub(&self, rhs: &HermitianMatrix) -> HermitianMatrix {
        HermitianMatrix { inner: &self.inner - &rhs.inner }
    }

    /// Real scaling keeps Hermitian symmetry.
    pub fn scale(&self, s: f64) -> HermitianMatrix {
        HermitianMatrix { inner: self.inner.scale_re(s) }
    }

    /// `self + s * I`.
    pub fn add_scalar(&self, s: f64) -> HermitianMatrix {
        let mut inner = self.inner.clone();
        let d = inner.dim;
        for i in 0..d {
            let v = inner.entries[i * d + i];
            inner.entries[i * d + i] = Complex64::new(v.re + s, 0.0);
        }
        HermitianMatrix { inner }
    }

    /// Unnormalized trace; real because the diagonal is real.
    pub fn trace_re(&self) -> f64 {
        self.inner.trace().re
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.inner.frobenius_norm()
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.inner.max_abs_entry()
    }

    /// True if every off-diagonal entry is (numerically) zero.
    pub fn is_diagonal(&self, tol: f64) -> bool {
        let d = self.dim();
        for i in 0..d {
            for j in 0..d {
                if i != j && self.get(i, j).norm() > tol {
                    return false;
                }
            }
        }
        true
    }

    pub fn diagonal_re(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.get(i, i).re).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn constructor_symmetrizes_within_tolerance() {
        let eps = 1e-14;
        let m = HermitianMatrix::new(
            2,
            vec![c(1.0, 0.0), c(0.5, 0.25), c(0.5, -0.25 + eps), c(2.0, 0.0)],
        )
        .unwrap();
        assert_eq!(m.get(0, 1), m.get(1, 0).conj());
        assert!((m.get(0, 1).im - (0.25 - eps / 2.0)).abs() < 1e-15);
    }

    #[test]
    fn constructor_rejects_gross_asymmetry() {
        let err = HermitianMatrix::new(
            2,
            vec![c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(2.0, 0.0)],
        )
        .unwrap_err();
        assert!(matches!(err, AlgebraError::NonHermitianInput { .. }));
    }

    #[test]
    fn adjoint_and_product() {
        let a = GeneralMatrix::new(2, vec![c(0.0, 1.0), c(2.0, 0.0), c(0.0, 0.0), c(1.0, -1.0)])
            .unwrap();
        let aa = a.abs_squared();
        // a* a is PSD Hermitian; trace = sum of squared absolute entries.
        let frob2: f64 = a.entries().iter().map(|z| z.norm_sqr()).sum();
        assert!((aa.trace_re() - frob2).abs() < 1e-14);
    }

    #[test]
    fn identity_is_neutral() {
        let a = GeneralMatrix::new(2, vec![c(1.0, 2.0), c(3.0, -1.0), c(0.5, 0.0), c(0.0, 4.0)])
            .unwrap();
        let i = GeneralMatrix::identity(2);
        assert_eq!(&a * &i, a);
        assert_eq!(&i * &a, a);
    }
}
