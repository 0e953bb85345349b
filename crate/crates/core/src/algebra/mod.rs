//! Finite-dimensional noncommutative probability space: Hermitian linear
//! algebra, functional calculus, the normalized trace, Schatten
//! p-(quasi-)norms and the Loewner order.
//!
//! Everything here is immutable after construction and every operation is a
//! pure function of its inputs, so the module is freely shareable across
//! threads.

mod calculus;
mod eigh;
mod json;
mod matrix;
mod random;
mod types;

pub use calculus::{
    func_calc, is_positive_definite, loewner_leq, power, schatten, Cholesky, SUPPORT_TOL_FACTOR,
};
pub use eigh::{eigh, spectral_norm, Eigh};
pub use json::{general_from_json, general_to_json, hermitian_from_json, hermitian_to_json};
pub use matrix::{GeneralMatrix, HermitianMatrix, HERMITIAN_TOL};
pub use random::{gaussian_matrix, random_hermitian, random_psd, random_psd_with};
pub use types::{PExponent, PRegime, PositiveOperator, TraceContext, PSD_TOL};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum AlgebraError {
    #[error("matrix dimension must be positive (got {dim})")]
    BadDimension { dim: usize },

    #[error("entry buffer has length {len}, expected {dim}x{dim}")]
    BadEntryCount { dim: usize, len: usize },

    #[error("input is not Hermitian: symmetry defect {defect:.3e} exceeds tolerance {tol:.3e}")]
    NonHermitianInput { defect: f64, tol: f64 },

    #[error("Jacobi eigensolver did not converge within {sweeps} sweeps")]
    ConvergenceFailure { sweeps: usize },

    #[error("negative power of an operator whose spectrum lies below the support cutoff {support_tol:.3e}")]
    SingularPower { support_tol: f64 },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("matrix is not positive semidefinite: min eigenvalue {min_eig:.3e} below -{tol:.3e}")]
    NotPositive { min_eig: f64, tol: f64 },

    #[error("exponent must be a positive number (got {p})")]
    InvalidExponent { p: f64 },

    #[error("malformed matrix JSON: {0}")]
    BadMatrixJson(String),
}
