//! Shared helpers for the integration suites: seeded instance generation and
//! an independent scalar-sequence oracle for the commutative embedding.

#![allow(dead_code)]

use ncmart_core::algebra::{
    gaussian_matrix, random_hermitian, GeneralMatrix, HermitianMatrix, PositiveOperator,
};
use ncmart_core::filtration::{
    random_tower, BlockTag, OperatorSequence, SubalgebraSpec, Tower, TowerFamily,
};
use ncmart_core::util::trial_seed;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng_for(master: u64, trial: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(trial_seed(master, trial))
}

/// Strictly positive definite input: a unit-scale Wishart sample plus a
/// small ridge, keeping trace powers well conditioned.
pub fn pd_operator(dim: usize, rng: &mut ChaCha8Rng) -> PositiveOperator {
    let g = gaussian_matrix(dim, rng);
    let h = (&g * &g.adjoint())
        .hermitian_part()
        .scale(1.0 / dim as f64)
        .add_scalar(0.02);
    PositiveOperator::new(h).expect("ridge keeps the sample positive")
}

pub fn pd_sequence(dim: usize, n: usize, rng: &mut ChaCha8Rng) -> OperatorSequence {
    OperatorSequence::new((0..n).map(|_| pd_operator(dim, rng)).collect()).expect("n >= 1")
}

pub fn mixed_tower(dim: usize, n: usize, rng: &mut ChaCha8Rng) -> Tower {
    random_tower(dim, n, &TowerFamily::ALL, rng).expect("valid preset families")
}

pub fn hermitian_input(dim: usize, rng: &mut ChaCha8Rng) -> HermitianMatrix {
    random_hermitian(dim, rng)
}

pub fn general_inputs(dim: usize, n: usize, rng: &mut ChaCha8Rng) -> Vec<GeneralMatrix> {
    (0..n).map(|_| gaussian_matrix(dim, rng)).collect()
}

/// Classical (fully commutative) probability on `d` uniform atoms: functions
/// are real vectors, conditional expectations are blockwise averages. This
/// is an independent code path used to cross-check the matrix pipeline on
/// all-scalar towers with diagonal inputs.
pub mod scalar_oracle {
    /// Blockwise average of `f` over the given partition.
    pub fn cond_exp(f: &[f64], partition: &[Vec<usize>]) -> Vec<f64> {
        let mut out = vec![0.0; f.len()];
        for block in partition {
            let avg: f64 = block.iter().map(|&i| f[i]).sum::<f64>() / block.len() as f64;
            for &i in block {
                out[i] = avg;
            }
        }
        out
    }

    pub fn norm_p(f: &[f64], p: f64) -> f64 {
        let d = f.len() as f64;
        (f.iter().map(|x| x.abs().powf(p)).sum::<f64>() / d).powf(1.0 / p)
    }

    pub fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }

    pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
        a.iter().zip(b).map(|(x, y)| x - y).collect()
    }

    /// Down-direction dual Doob ratio `||sum f_k||_p / ||sum E_k f_k||_p`.
    pub fn dd_down_ratio(fs: &[Vec<f64>], partitions: &[Vec<Vec<usize>>], p: f64) -> f64 {
        let d = fs[0].len();
        let mut num = vec![0.0; d];
        let mut den = vec![0.0; d];
        for (f, part) in fs.iter().zip(partitions) {
            num = add(&num, f);
            den = add(&den, &cond_exp(f, part));
        }
        norm_p(&num, p) / norm_p(&den, p)
    }

    /// Square function and conditioned square function of the martingale of
    /// `f` along the partitions, both at full horizon (pointwise values).
    pub fn square_functions(f: &[f64], partitions: &[Vec<Vec<usize>>]) -> (Vec<f64>, Vec<f64>) {
        let n = partitions.len();
        let mut es: Vec<Vec<f64>> = Vec::with_capacity(n);
        for part in partitions {
            es.push(cond_exp(f, part));
        }
        let d = f.len();
        let mut s_sq = vec![0.0; d];
        let mut s_cond_sq = vec![0.0; d];
        for k in 0..n {
            let inc = if k == 0 { es[0].clone() } else { sub(&es[k], &es[k - 1]) };
            let inc_sq: Vec<f64> = inc.iter().map(|x| x * x).collect();
            s_sq = add(&s_sq, &inc_sq);
            if k == 0 {
                s_cond_sq = add(&s_cond_sq, &inc_sq);
            } else {
                s_cond_sq = add(&s_cond_sq, &cond_exp(&inc_sq, &partitions[k - 1]));
            }
        }
        (s_sq.iter().map(|x| x.sqrt()).collect(), s_cond_sq.iter().map(|x| x.sqrt()).collect())
    }
}

/// Extracts the scalar-block partition of an all-scalar spec.
pub fn spec_partition(spec: &SubalgebraSpec) -> Option<Vec<Vec<usize>>> {
    let mut out = Vec::with_capacity(spec.blocks().len());
    for b in spec.blocks() {
        if b.tag() != BlockTag::Scalar {
            return None;
        }
        out.push(b.indices().to_vec());
    }
    Some(out)
}
