//! Maximal-norm solver properties: weak duality, commuting exactness,
//! witness monotonicity, and the Doob bound on every generated dual value.

mod common;

use common::{mixed_tower, pd_operator, rng_for};
use ncmart_core::algebra::{
    eigh, schatten, HermitianMatrix, PExponent, PositiveOperator, TraceContext,
};
use ncmart_core::maximal::{doob_report, maximal_primal, SolverOptions};
use ncmart_core::util::parse_f64;
use rand::Rng;

#[test]
fn weak_duality_on_random_instances() {
    for trial in 0..12u64 {
        let mut rng = rng_for(0x3a01, trial);
        let dim = 2 + (trial % 4) as usize;
        let n = 1 + (trial % 3) as usize;
        let xs: Vec<PositiveOperator> = (0..n).map(|_| pd_operator(dim, &mut rng)).collect();
        let p = [2.0, 3.0, 4.0][(trial % 3) as usize];
        let r = maximal_primal(&xs, p, &SolverOptions::default()).unwrap();
        assert!(r.gap >= -1e-7, "trial {trial}: gap {}", r.gap);
        // Witness feasibility certificate.
        for x in &xs {
            let gap = eigh(&r.witness.matrix().sub(x.matrix())).unwrap().min_eig();
            assert!(gap >= -1e-9, "trial {trial}: feasibility {gap}");
        }
    }
}

#[test]
fn commuting_families_match_the_entrywise_max() {
    for trial in 0..10u64 {
        let mut rng = rng_for(0x3a02, trial);
        let dim = 2 + (trial % 3) as usize;
        let n = 2 + (trial % 3) as usize;
        let fs: Vec<Vec<f64>> =
            (0..n).map(|_| (0..dim).map(|_| rng.random_range(0.05..3.0)).collect()).collect();
        let xs: Vec<PositiveOperator> = fs
            .iter()
            .map(|f| PositiveOperator::new(HermitianMatrix::diag(f)).unwrap())
            .collect();
        let p = [2.0, 3.0][(trial % 2) as usize];
        // Exactness needs a certified gap well under the comparison
        // tolerance, so run past the default early-stop threshold.
        let opts = SolverOptions { gap_tol: 1e-7, ..SolverOptions::default() };
        let r = maximal_primal(&xs, p, &opts).unwrap();

        let max_diag: Vec<f64> =
            (0..dim).map(|i| fs.iter().map(|f| f[i]).fold(0.0, f64::max)).collect();
        let ctx = TraceContext::new(dim).unwrap();
        let expected = schatten(
            &HermitianMatrix::diag(&max_diag),
            &ctx,
            &PExponent::new(p).unwrap(),
        )
        .unwrap();
        assert!(
            (r.value - expected).abs() <= 1e-6 * (1.0 + expected),
            "trial {trial} p {p}: value {} expected {expected} gap {}",
            r.value,
            r.gap
        );
    }
}

#[test]
fn appending_a_dominated_element_keeps_the_value() {
    // The zero matrix is dominated by every feasible point, so appending it
    // cannot change the infimum. Run with a deep barrier schedule so the two
    // central paths agree to the tolerance.
    let opts = SolverOptions { mu_min: 1e-10, ..SolverOptions::default() };
    for trial in 0..4u64 {
        let mut rng = rng_for(0x3a03, trial);
        let dim = 2 + (trial % 3) as usize;
        let xs: Vec<PositiveOperator> =
            (0..2).map(|_| pd_operator(dim, &mut rng)).collect();
        let base = maximal_primal(&xs, 2.0, &opts).unwrap();

        let mut extended = xs.clone();
        extended.push(PositiveOperator::new(HermitianMatrix::zero(dim)).unwrap());
        let more = maximal_primal(&extended, 2.0, &opts).unwrap();
        assert!(
            (base.value - more.value).abs() <= 1e-8 * (1.0 + base.value),
            "trial {trial}: {} vs {}",
            base.value,
            more.value
        );
    }
}

#[test]
fn every_dual_value_obeys_the_doob_bound() {
    // dual <= p' ||x||_p + tol holds regardless of solver convergence.
    for trial in 0..9u64 {
        let mut rng = rng_for(0x3a04, trial);
        let dim = 2 + (trial % 3) as usize;
        let n = 2 + (trial % 3) as usize;
        let tower = mixed_tower(dim, n, &mut rng);
        let x = pd_operator(dim, &mut rng);
        let p = [2.0, 3.0, 4.0][(trial % 3) as usize];
        let report = doob_report(&tower, &x, p, &SolverOptions::default()).unwrap();
        let dual = parse_f64(report.params.get("dual_bound").unwrap()).unwrap();
        let p_conj = PExponent::new(p).unwrap().conjugate().unwrap();
        assert!(
            dual <= p_conj * report.rhs + 1e-8 * (1.0 + report.rhs),
            "trial {trial} p {p}: dual {dual} vs bound {}",
            p_conj * report.rhs
        );
        assert_eq!(report.params.get("dual_within_bound").map(String::as_str), Some("true"));
    }
}

#[test]
fn doob_report_dim_one_and_infinity() {
    // dim 1: E_n(x) = x for all n, so the value equals |x| and the ratio is
    // 1 <= p'. p = infinity: the value never exceeds the spectral norm.
    let tower = ncmart_core::filtration::validate_tower(vec![
        ncmart_core::filtration::SubalgebraSpec::trivial(1);
        3
    ])
    .unwrap();
    let x = PositiveOperator::new(HermitianMatrix::diag(&[1.75])).unwrap();
    let r = doob_report(&tower, &x, 2.0, &SolverOptions::default()).unwrap();
    assert!((r.ratio - 1.0).abs() <= 1e-4, "ratio {}", r.ratio);
    assert!(r.ratio <= 2.0 + 1e-9);

    let mut rng = rng_for(0x3a05, 0);
    let dim = 3;
    let tower = mixed_tower(dim, 3, &mut rng);
    let x = pd_operator(dim, &mut rng);
    let r = doob_report(&tower, &x, f64::INFINITY, &SolverOptions::default()).unwrap();
    assert!((r.constant - 1.0).abs() < 1e-15);
    let spec_norm = eigh(x.matrix()).unwrap().spectral_norm();
    assert!(r.lhs <= spec_norm * (1.0 + 1e-12), "lhs {} vs {spec_norm}", r.lhs);
}
