//! Seeded random inputs. All draws go through a counter-based ChaCha stream
//! keyed by the seed, so every matrix is reproducible bit-for-bit.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::matrix::{GeneralMatrix, HermitianMatrix};
use super::types::PositiveOperator;
use super::AlgebraError;

/// A `dim x dim` matrix with independent complex Gaussian entries
/// (real and imaginary parts standard normal).
pub fn gaussian_matrix(dim: usize, rng: &mut ChaCha8Rng) -> GeneralMatrix {
    let mut entries = Vec::with_capacity(dim * dim);
    for _ in 0..dim * dim {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        entries.push(Complex64::new(re, im));
    }
    GeneralMatrix::new(dim, entries).expect("dim > 0")
}

/// Random Hermitian matrix `(G + G*) / 2` from a Gaussian factor.
pub fn random_hermitian(dim: usize, rng: &mut ChaCha8Rng) -> HermitianMatrix {
    gaussian_matrix(dim, rng).hermitian_part()
}

/// Wishart-type sample `scale * G G*`; strictly positive definite with
/// probability one and fully reproducible from the seed.
pub fn random_psd(dim: usize, seed: u64, scale: f64) -> Result<PositiveOperator, AlgebraError> {
    if dim == 0 {
        return Err(AlgebraError::BadDimension { dim });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_psd_with(dim, scale, &mut rng)
}

/// Same sampler driven by an external stream, used where many draws share
/// one per-trial generator.
pub fn random_psd_with(
    dim: usize,
    scale: f64,
    rng: &mut ChaCha8Rng,
) -> Result<PositiveOperator, AlgebraError> {
    let g = gaussian_matrix(dim, rng);
    PositiveOperator::new((&g * &g.adjoint()).hermitian_part().scale(scale))
}
