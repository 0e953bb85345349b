//! Conditional-expectation axioms on random block specs: trace preservation,
//! idempotence, the module property, trace duality, positivity, Kadison's
//! inequality, and tower compatibility.

mod common;

use common::{mixed_tower, rng_for};
use ncmart_core::algebra::{eigh, gaussian_matrix, loewner_leq, TraceContext};
use ncmart_core::filtration::{cond_exp, cond_exp_general};

const TRIALS: u64 = 200;

#[test]
fn trace_preservation() {
    for trial in 0..TRIALS {
        let mut rng = rng_for(0xCE01, trial);
        let dim = 2 + (trial % 7) as usize;
        let tower = mixed_tower(dim, 1, &mut rng);
        let x = common::hermitian_input(dim, &mut rng);
        let ctx = TraceContext::new(dim).unwrap();
        let e = cond_exp(tower.spec(0), &x).unwrap();
        let scale = eigh(&x).unwrap().spectral_norm();
        assert!(
            (ctx.tau(&e) - ctx.tau(&x)).abs() <= 1e-12 * (1.0 + scale),
            "trial {trial}"
        );
    }
}

#[test]
fn idempotence() {
    for trial in 0..TRIALS {
        let mut rng = rng_for(0xCE02, trial);
        let dim = 2 + (trial % 7) as usize;
        let tower = mixed_tower(dim, 1, &mut rng);
        let x = common::hermitian_input(dim, &mut rng);
        let once = cond_exp(tower.spec(0), &x).unwrap();
        let twice = cond_exp(tower.spec(0), &once).unwrap();
        assert!(twice.sub(&once).frobenius_norm() <= 1e-12, "trial {trial}");
    }
}

#[test]
fn module_property() {
    // E(x y) = E(x) y for y in the subalgebra.
    for trial in 0..TRIALS {
        let mut rng = rng_for(0xCE03, trial);
        let dim = 2 + (trial % 7) as usize;
        let tower = mixed_tower(dim, 1, &mut rng);
        let spec = tower.spec(0);
        let x = gaussian_matrix(dim, &mut rng);
        // A generic subalgebra element: the conditional expectation of a
        // random matrix.
        let y = cond_exp_general(spec, &gaussian_matrix(dim, &mut rng)).unwrap();
        let lhs = cond_exp_general(spec, &(&x * &y)).unwrap();
        let rhs = &cond_exp_general(spec, &x).unwrap() * &y;
        assert!((&lhs - &rhs).frobenius_norm() <= 1e-10, "trial {trial}");
        // And on the other side.
        let lhs2 = cond_exp_general(spec, &(&y * &x)).unwrap();
        let rhs2 = &y * &cond_exp_general(spec, &x).unwrap();
        assert!((&lhs2 - &rhs2).frobenius_norm() <= 1e-10, "trial {trial}");
    }
}

#[test]
fn trace_duality() {
    // tau(E(x) y) = tau(x E(y)).
    for trial in 0..TRIALS {
        let mut rng = rng_for(0xCE04, trial);
        let dim = 2 + (trial % 7) as usize;
        let tower = mixed_tower(dim, 1, &mut rng);
        let spec = tower.spec(0);
        let x = common::hermitian_input(dim, &mut rng);
        let y = common::hermitian_input(dim, &mut rng);
        let ctx = TraceContext::new(dim).unwrap();
        let lhs = ctx.tau_product(&cond_exp(spec, &x).unwrap(), &y);
        let rhs = ctx.tau_product(&x, &cond_exp(spec, &y).unwrap());
        assert!((lhs - rhs).abs() <= 1e-10, "trial {trial}: {lhs} vs {rhs}");
    }
}

#[test]
fn positivity() {
    for trial in 0..TRIALS {
        let mut rng = rng_for(0xCE05, trial);
        let dim = 2 + (trial % 7) as usize;
        let tower = mixed_tower(dim, 1, &mut rng);
        let x = common::pd_operator(dim, &mut rng);
        let e = cond_exp(tower.spec(0), x.matrix()).unwrap();
        let min_eig = eigh(&e).unwrap().min_eig();
        assert!(min_eig >= -1e-10, "trial {trial}: min eig {min_eig}");
    }
}

#[test]
fn kadison_inequality() {
    // |E(a)|^2 <= E(|a|^2) for general (non-Hermitian) a, |z|^2 = z* z.
    for trial in 0..TRIALS {
        let mut rng = rng_for(0xCE06, trial);
        let dim = 2 + (trial % 7) as usize;
        let tower = mixed_tower(dim, 1, &mut rng);
        let spec = tower.spec(0);
        let a = gaussian_matrix(dim, &mut rng);
        let ea = cond_exp_general(spec, &a).unwrap();
        let lhs = ea.abs_squared();
        let rhs = cond_exp(spec, &a.abs_squared()).unwrap();
        let (holds, gap) = loewner_leq(&lhs, &rhs, 1e-10).unwrap();
        assert!(holds, "trial {trial}: min gap eigenvalue {gap}");
    }
}

#[test]
fn tower_compatibility() {
    // E_j o E_k = E_j for j <= k.
    for trial in 0..TRIALS {
        let mut rng = rng_for(0xCE07, trial);
        let dim = 2 + (trial % 7) as usize;
        let n = 2 + (trial % 4) as usize;
        let tower = mixed_tower(dim, n, &mut rng);
        let x = common::hermitian_input(dim, &mut rng);
        for j in 0..n {
            for k in j..n {
                let inner = cond_exp(tower.spec(k), &x).unwrap();
                let lhs = cond_exp(tower.spec(j), &inner).unwrap();
                let rhs = cond_exp(tower.spec(j), &x).unwrap();
                assert!(
                    lhs.sub(&rhs).frobenius_norm() <= 1e-10,
                    "trial {trial}, j {j}, k {k}"
                );
            }
        }
    }
}
