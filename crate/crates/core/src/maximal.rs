//! The vector-valued maximal norm
//! `||(x_n)||_{L_p(M, l_inf)} = inf { ||a||_p : a >= 0, x_n <= a for all n }`
//! and the sharp Doob inequality built on it.
//!
//! The primal solver is a logarithmic-barrier interior-point scheme: minimize
//! `tau(a^p) - mu * sum_n tau(log(a - x_n))` over strictly feasible `a`,
//! shrinking `mu` geometrically. The inner minimizer is a damped Newton
//! method: both Hessian terms have closed forms (the divided-difference
//! transform of `t^{p-1}` for the objective, `mu * M^{-1} h M^{-1}` for each
//! barrier block), so Newton directions come from conjugate gradients on
//! Hessian-vector products, followed by Armijo backtracking that also
//! maintains feasibility. Every iterate is strictly feasible, so the
//! returned witness always certifies `x_n <= a`.
//!
//! Dual side: any tuple `y_n >= 0` normalized to `||sum y_n||_{p'} <= 1`
//! gives the lower bound `sum tau(x_n y_n)` on the infimum (Hoelder), so
//! `gap = value - dual_bound` is a convergence certificate independent of the
//! solver's own state. For `p = infinity` the problem has the closed-form
//! solution `max_n lambda_max(x_n)`, attained at a scalar witness, and the
//! scaled top eigenprojector is a matching dual certificate.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::algebra::{
    eigh, gaussian_matrix, AlgebraError, Cholesky, Eigh, GeneralMatrix, HermitianMatrix,
    PExponent, PositiveOperator, TraceContext,
};
use crate::filtration::{cond_exp_pos, FiltrationError, Tower};
use crate::inequalities::{IneqReport, InequalityError};

#[derive(Debug, Error)]
pub enum MaximalError {
    #[error("maximal norm requires p in [2, infinity], got {p}")]
    OutsideRange { p: f64 },

    #[error("empty operator family")]
    EmptyFamily,

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error(transparent)]
    Algebra(#[from] AlgebraError),

    #[error(transparent)]
    Filtration(#[from] FiltrationError),

    #[error(transparent)]
    Inequality(#[from] InequalityError),
}

#[derive(Debug, Clone)]
pub struct SolverOptions {
    /// Initial barrier weight.
    pub mu0: f64,
    /// Final barrier weight; the schedule is geometric.
    pub mu_min: f64,
    /// Barrier shrink factor per level.
    pub mu_factor: f64,
    /// Relative duality-gap target; the solve stops early once certified.
    pub gap_tol: f64,
    /// Inner iteration cap per barrier level.
    pub max_inner_iters: usize,
    /// Overall iteration cap; hitting it returns the best feasible point
    /// found with `converged = false`.
    pub max_total_iters: usize,
    /// Number of random PSD dual tuples tried alongside the KKT candidates.
    pub dual_random_candidates: usize,
    /// Seed for the random dual candidates.
    pub seed: u64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            mu0: 1.0,
            mu_min: 1e-8,
            mu_factor: 0.5,
            gap_tol: 1e-5,
            max_inner_iters: 60,
            max_total_iters: 20_000,
            dual_random_candidates: 32,
            seed: 0x6e63_6d61_7274_0001,
        }
    }
}

#[derive(Debug, Clone)]
pub struct MaximalNormResult {
    /// Primal objective `||witness||_p` at the returned feasible witness.
    pub value: f64,
    /// Feasible dominating operator, `witness >= x_n` for all `n`.
    pub witness: PositiveOperator,
    /// Best certified lower bound on the infimum.
    pub dual_bound: f64,
    /// `value - dual_bound`.
    pub gap: f64,
    pub iterations: usize,
    pub converged: bool,
}

fn family_dim(xs: &[PositiveOperator]) -> Result<usize, MaximalError> {
    let first = xs.first().ok_or(MaximalError::EmptyFamily)?;
    let dim = first.dim();
    for x in xs {
        if x.dim() != dim {
            return Err(MaximalError::DimensionMismatch { left: dim, right: x.dim() });
        }
    }
    Ok(dim)
}

/// Dual value of one candidate tuple after normalizing `sum y_n` to unit
/// `p'`-norm; `None` when the tuple is not normalizable (all zero).
fn dual_value_of(
    xs: &[PositiveOperator],
    p_conj: f64,
    ys: &[HermitianMatrix],
    ctx: &TraceContext,
) -> Result<Option<f64>, MaximalError> {
    let d = ctx.dim();
    let mut total = HermitianMatrix::zero(d);
    for y in ys {
        total = total.add(y);
    }
    let e = eigh(&total)?;
    let norm = if p_conj.is_infinite() {
        e.spectral_norm()
    } else {
        let sum: f64 = e.eigenvalues.iter().map(|&l| l.max(0.0).powf(p_conj)).sum();
        (sum * ctx.normalization()).powf(1.0 / p_conj)
    };
    if norm <= 1e-300 {
        return Ok(None);
    }
    let mut pairing = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        pairing += ctx.tau_product(x.matrix(), y);
    }
    Ok(Some(pairing / norm))
}

/// Best dual lower bound over the supplied candidate tuple, or over
/// generated candidates (KKT multipliers at the barrier solution plus seeded
/// random PSD tuples) when `ys` is omitted. Always a valid lower bound for
/// the primal infimum.
pub fn maximal_dual_bound(
    xs: &[PositiveOperator],
    p: f64,
    ys: Option<&[PositiveOperator]>,
    opts: &SolverOptions,
) -> Result<f64, MaximalError> {
    let dim = family_dim(xs)?;
    if !(p >= 2.0) {
        return Err(MaximalError::OutsideRange { p });
    }
    let ctx = TraceContext::new(dim).expect("dim > 0");
    let p_conj = PExponent::new(p)?.conjugate().expect("p >= 2");
    match ys {
        Some(tuple) => {
            if tuple.len() != xs.len() {
                return Err(MaximalError::DimensionMismatch { left: tuple.len(), right: xs.len() });
            }
            let mats: Vec<HermitianMatrix> = tuple.iter().map(|y| y.matrix().clone()).collect();
            Ok(dual_value_of(xs, p_conj, &mats, &ctx)?.unwrap_or(0.0))
        }
        None => Ok(maximal_primal(xs, p, opts)?.dual_bound),
    }
}

/// Solves the primal problem. `p` must lie in `[2, infinity]`;
/// `p = infinity` is answered in closed form (`max_n lambda_max(x_n)`, scalar
/// witness, exact dual certificate).
pub fn maximal_primal(
    xs: &[PositiveOperator],
    p: f64,
    opts: &SolverOptions,
) -> Result<MaximalNormResult, MaximalError> {
    let dim = family_dim(xs)?;
    if !(p >= 2.0) {
        return Err(MaximalError::OutsideRange { p });
    }
    let ctx = TraceContext::new(dim).expect("dim > 0");

    // Scale of the family; positive homogeneity lets us solve at unit scale.
    let mut tops: Vec<f64> = Vec::with_capacity(xs.len());
    for x in xs {
        tops.push(eigh(x.matrix())?.max_eig().max(0.0));
    }
    let scale = tops.iter().cloned().fold(0.0, f64::max);

    if scale == 0.0 {
        // Entire family vanishes: the infimum 0 is attained at a = 0.
        return Ok(MaximalNormResult {
            value: 0.0,
            witness: PositiveOperator::new(HermitianMatrix::zero(dim))?,
            dual_bound: 0.0,
            gap: 0.0,
            iterations: 0,
            converged: true,
        });
    }

    if p.is_infinite() {
        return solve_infinity(xs, &tops, scale, &ctx);
    }

    let scaled: Vec<HermitianMatrix> =
        xs.iter().map(|x| x.matrix().scale(1.0 / scale)).collect();
    let solved = barrier_solve(&scaled, p, opts, &ctx)?;

    // Map back to the original scale (the problem is positively homogeneous).
    let witness = PositiveOperator::new(solved.a.scale(scale))?;
    let value = solved.value * scale;
    let dual_bound = solved.dual * scale;
    Ok(MaximalNormResult {
        value,
        witness,
        dual_bound,
        gap: value - dual_bound,
        iterations: solved.iterations,
        converged: solved.converged,
    })
}

/// `p = infinity`: `inf { ||a||_inf : a >= x_n }` equals
/// `max_n lambda_max(x_n)` (any feasible `a` dominates each top eigenvalue,
/// and that scalar multiple of the identity is feasible). The matching dual
/// certificate is `d * (top eigenprojector)` placed at the argmax.
fn solve_infinity(
    xs: &[PositiveOperator],
    tops: &[f64],
    scale: f64,
    ctx: &TraceContext,
) -> Result<MaximalNormResult, MaximalError> {
    let dim = ctx.dim();
    let (best_n, &lambda) = tops
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.partial_cmp(b.1).unwrap().then(b.0.cmp(&a.0)))
        .expect("nonempty");
    debug_assert!((lambda - scale).abs() <= f64::EPSILON * scale.abs());

    let witness = PositiveOperator::new(HermitianMatrix::identity(dim).scale(lambda))?;
    // Dual pairing: tau(x_n* . d P) = lambda for the top eigenprojector P,
    // and ||d P||_1 = 1.
    let e = eigh(xs[best_n].matrix())?;
    let top_col = dim - 1;
    let mut proj = GeneralMatrix::zero(dim);
    for i in 0..dim {
        for j in 0..dim {
            let v = e.basis.get(i, top_col) * e.basis.get(j, top_col).conj();
            proj.set(i, j, v);
        }
    }
    let y = HermitianMatrix::symmetrized(&proj).scale(dim as f64);
    let dual = ctx.tau_product(xs[best_n].matrix(), &y);

    Ok(MaximalNormResult {
        value: lambda,
        witness,
        dual_bound: dual,
        gap: lambda - dual,
        iterations: 0,
        converged: true,
    })
}

struct BarrierSolution {
    a: HermitianMatrix,
    value: f64,
    dual: f64,
    iterations: usize,
    converged: bool,
}

/// Barrier objective in unnormalized trace units:
/// `Phi(a) = Tr(a^p) - mu * sum_n logdet(a - x_n)`.
/// Returns `None` when `a` is not strictly feasible.
fn barrier_value(a: &HermitianMatrix, xs: &[HermitianMatrix], p: f64, mu: f64) -> Option<f64> {
    let ea = eigh(a).ok()?;
    if ea.min_eig() <= 0.0 {
        return None;
    }
    let tr_pow: f64 = ea.eigenvalues.iter().map(|&l| l.max(0.0).powf(p)).sum();
    let mut logdets = 0.0;
    for x in xs {
        let chol = Cholesky::decompose(&a.sub(x), 0.0)?;
        logdets += chol.log_det();
    }
    Some(tr_pow - mu * logdets)
}

fn frobenius_inner(u: &HermitianMatrix, v: &HermitianMatrix) -> f64 {
    let d = u.dim();
    let mut sum = 0.0;
    for i in 0..d {
        for j in 0..d {
            sum += (u.get(i, j) * v.get(j, i)).re;
        }
    }
    sum
}

/// Frechet derivative of `a -> a^r` at the decomposed point, applied to `h`:
/// `U (K . (U* h U)) U*` with `K` the divided-difference table of `t^r`.
fn dpow_apply(ea: &Eigh, r: f64, h: &HermitianMatrix) -> HermitianMatrix {
    let d = ea.dim();
    let u = &ea.basis;
    let m = &(&u.adjoint() * h.as_general()) * u;
    let mut scaled = GeneralMatrix::zero(d);
    for i in 0..d {
        let li = ea.eigenvalues[i].max(0.0);
        for j in 0..d {
            let lj = ea.eigenvalues[j].max(0.0);
            let k = if (li - lj).abs() > 1e-12 * (1.0 + li + lj) {
                (li.powf(r) - lj.powf(r)) / (li - lj)
            } else {
                let mid = 0.5 * (li + lj);
                if mid <= 0.0 { 0.0 } else { r * mid.powf(r - 1.0) }
            };
            scaled.set(i, j, m.get(i, j).scale(k));
        }
    }
    HermitianMatrix::symmetrized(&(&(u * &scaled) * &u.adjoint()))
}

/// Conjugate gradients for `H x = b` given Hessian-vector products; `H` is
/// positive definite on the Hermitian space, so plain CG applies.
fn cg_solve(
    hop: &dyn Fn(&HermitianMatrix) -> HermitianMatrix,
    b: &HermitianMatrix,
    rel_tol: f64,
    max_iters: usize,
) -> HermitianMatrix {
    let mut x = HermitianMatrix::zero(b.dim());
    let mut resid = b.clone();
    let mut dir = resid.clone();
    let b_norm = b.frobenius_norm().max(1e-300);
    let mut rs = frobenius_inner(&resid, &resid);
    for _ in 0..max_iters {
        if rs.sqrt() <= rel_tol * b_norm {
            break;
        }
        let h_dir = hop(&dir);
        let curvature = frobenius_inner(&dir, &h_dir);
        if curvature <= 0.0 || !curvature.is_finite() {
            break;
        }
        let alpha = rs / curvature;
        x = x.add(&dir.scale(alpha));
        resid = resid.sub(&h_dir.scale(alpha));
        let rs_next = frobenius_inner(&resid, &resid);
        dir = resid.add(&dir.scale(rs_next / rs));
        rs = rs_next;
    }
    x
}

fn barrier_solve(
    xs: &[HermitianMatrix],
    p: f64,
    opts: &SolverOptions,
    ctx: &TraceContext,
) -> Result<BarrierSolution, MaximalError> {
    let dim = ctx.dim();
    let n = xs.len();
    let p_conj = p / (p - 1.0);

    // Strictly feasible start: unit-scaled family has top eigenvalue 1.
    let mut a = HermitianMatrix::identity(dim).scale(2.0);
    let mut total_iters = 0usize;
    let mut best_dual = 0.0f64;
    let mut converged = false;

    let objective = |a: &HermitianMatrix| -> Result<f64, MaximalError> {
        let e = eigh(a)?;
        let sum: f64 = e.eigenvalues.iter().map(|&l| l.max(0.0).powf(p)).sum();
        Ok((sum * ctx.normalization()).powf(1.0 / p))
    };

    let mut mu = opts.mu0;
    'outer: loop {
        // Inner minimization of Phi_mu by damped Newton steps.
        for _ in 0..opts.max_inner_iters {
            if total_iters >= opts.max_total_iters {
                break 'outer;
            }
            let ea = eigh(&a)?;
            let mut grad = ea.apply(|l| p * l.max(0.0).powf(p - 1.0));
            let mut inverses = Vec::with_capacity(n);
            for x in xs {
                let chol = Cholesky::decompose(&a.sub(x), 0.0)
                    .expect("iterates stay strictly feasible");
                inverses.push(chol.inverse());
            }
            for inv in &inverses {
                grad = grad.sub(&inv.scale(mu));
            }

            let gnorm = grad.frobenius_norm();
            let gscale = 1.0 + p * ea.max_eig().max(0.0).powf(p - 1.0) * (dim as f64).sqrt();
            if gnorm <= gscale * (1e-11 + 1e-6 * mu) {
                break;
            }

            // Newton direction from CG on exact Hessian-vector products:
            // H[h] = p * D(t^{p-1})(a)[h] + mu * sum_n inv_n h inv_n.
            let hessian = |h: &HermitianMatrix| -> HermitianMatrix {
                let mut out = dpow_apply(&ea, p - 1.0, h).scale(p);
                for inv in &inverses {
                    let sandwich = &(inv.as_general() * h.as_general()) * inv.as_general();
                    out = out.add(&HermitianMatrix::symmetrized(&sandwich).scale(mu));
                }
                out
            };
            let forcing = (gnorm / gscale).sqrt().clamp(1e-10, 0.1);
            let mut direction = cg_solve(&hessian, &grad.scale(-1.0), forcing, 8 * dim * dim);
            let mut slope = frobenius_inner(&grad, &direction);
            if !(slope < 0.0) {
                direction = grad.scale(-1.0);
                slope = -gnorm * gnorm;
            }

            let phi0 = barrier_value(&a, xs, p, mu).expect("current point feasible");
            let mut t = 1.0;
            let mut moved = false;
            for _ in 0..60 {
                let trial = a.add(&direction.scale(t));
                if let Some(phi) = barrier_value(&trial, xs, p, mu) {
                    if phi <= phi0 + 1e-4 * t * slope {
                        a = trial;
                        moved = true;
                        break;
                    }
                }
                t *= 0.5;
            }
            total_iters += 1;
            if !moved {
                break; // line search exhausted: stationary at this level
            }
        }

        // KKT dual candidate at this barrier level: y_n = mu (a - x_n)^{-1}.
        let mut kkt = Vec::with_capacity(n);
        for x in xs {
            let chol =
                Cholesky::decompose(&a.sub(x), 0.0).expect("iterates stay strictly feasible");
            kkt.push(chol.inverse().scale(mu));
        }
        let xs_pos: Vec<PositiveOperator> = xs
            .iter()
            .map(|x| PositiveOperator::new(x.clone()))
            .collect::<Result<_, _>>()?;
        if let Some(v) = dual_value_of(&xs_pos, p_conj, &kkt, ctx)? {
            best_dual = best_dual.max(v);
        }

        let value = objective(&a)?;
        if value - best_dual <= opts.gap_tol * (1.0 + value.abs()) {
            converged = true;
            break;
        }
        mu *= opts.mu_factor;
        if mu < opts.mu_min {
            break;
        }
    }

    // Random dual tuples as a safety net alongside the KKT candidates.
    let xs_pos: Vec<PositiveOperator> = xs
        .iter()
        .map(|x| PositiveOperator::new(x.clone()))
        .collect::<Result<_, _>>()?;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for _ in 0..opts.dual_random_candidates {
        let tuple: Vec<HermitianMatrix> = (0..n)
            .map(|_| {
                let g = gaussian_matrix(dim, &mut rng);
                (&g * &g.adjoint()).hermitian_part()
            })
            .collect();
        if let Some(v) = dual_value_of(&xs_pos, p_conj, &tuple, ctx)? {
            best_dual = best_dual.max(v);
        }
    }

    let value = objective(&a)?;
    if value - best_dual <= opts.gap_tol * (1.0 + value.abs()) {
        converged = true;
    }
    Ok(BarrierSolution { a, value, dual: best_dual, iterations: total_iters, converged })
}

/// Sharp Doob inequality via the maximal norm: with `x_n := E_n(x)`,
/// `||(E_n(x))_n||_{L_p(M, l_inf)} <= p' ||x||_p` for `2 <= p <= infinity`
/// (`p' = 1` at `p = infinity`). The report's `lhs` is the primal value at
/// the returned witness; `params` carries the dual bound and gap.
pub fn doob_report(
    tower: &Tower,
    x: &PositiveOperator,
    p: f64,
    opts: &SolverOptions,
) -> Result<IneqReport, MaximalError> {
    if !(p >= 2.0) {
        return Err(MaximalError::OutsideRange { p });
    }
    if x.dim() != tower.dim() {
        return Err(MaximalError::DimensionMismatch { left: x.dim(), right: tower.dim() });
    }
    let ctx = TraceContext::new(tower.dim()).expect("dim > 0");
    let mut xs = Vec::with_capacity(tower.len());
    for spec in tower.specs() {
        xs.push(cond_exp_pos(spec, x)?);
    }
    let result = maximal_primal(&xs, p, opts)?;
    let pe = PExponent::new(p)?;
    let norm_x = crate::algebra::schatten(x.matrix(), &ctx, &pe)?;
    let constant = pe.conjugate().expect("p >= 2");

    let report = IneqReport::new("doob", p, result.value, norm_x, constant)?
        .with_param("dual_bound", crate::util::fmt_f64(result.dual_bound))
        .with_param("gap", crate::util::fmt_f64(result.gap))
        .with_param("iterations", result.iterations)
        .with_param("converged", result.converged)
        .with_param(
            "dual_within_bound",
            result.dual_bound <= constant * norm_x + 1e-8 * (1.0 + norm_x),
        );
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pos(values: &[f64]) -> PositiveOperator {
        PositiveOperator::new(HermitianMatrix::diag(values)).unwrap()
    }

    #[test]
    fn single_element_attains_its_norm() {
        let x = pos(&[1.0, 0.25]);
        let opts = SolverOptions::default();
        let r = maximal_primal(&[x.clone()], 2.0, &opts).unwrap();
        let ctx = TraceContext::new(2).unwrap();
        let expected =
            crate::algebra::schatten(x.matrix(), &ctx, &PExponent::new(2.0).unwrap()).unwrap();
        assert!(
            (r.value - expected).abs() < 1e-4 * (1.0 + expected),
            "value {} expected {}",
            r.value,
            expected
        );
        assert!(r.gap <= 1e-4 * (1.0 + r.value), "gap {}", r.gap);
    }

    #[test]
    fn zero_family_is_exact() {
        let r = maximal_primal(&[pos(&[0.0, 0.0])], 2.0, &SolverOptions::default()).unwrap();
        assert_eq!(r.value, 0.0);
        assert_eq!(r.gap, 0.0);
        assert!(r.converged);
    }

    #[test]
    fn commuting_family_matches_entrywise_max() {
        // diag(1,0) and diag(0,2): pointwise max diag(1,2),
        // ||diag(1,2)||_2 = sqrt(5/2).
        let xs = [pos(&[1.0, 0.0]), pos(&[0.0, 2.0])];
        let r = maximal_primal(&xs, 2.0, &SolverOptions::default()).unwrap();
        let expected = (5.0f64 / 2.0).sqrt();
        assert!((expected - 1.58114).abs() < 1e-5);
        assert!(
            (r.value - expected).abs() < 1e-5 * (1.0 + expected),
            "value {} expected {expected}, gap {}",
            r.value,
            r.gap
        );
        // Witness feasibility.
        for x in &xs {
            let gap = eigh(&r.witness.matrix().sub(x.matrix())).unwrap().min_eig();
            assert!(gap >= -1e-9, "feasibility gap {gap}");
        }
    }

    #[test]
    fn dual_of_single_element_reaches_its_norm() {
        // Hoelder-optimal candidate y = x^{p-1} certifies ||x||_p.
        let x = pos(&[2.0, 1.0]);
        let p = 3.0;
        let y = PositiveOperator::new(
            crate::algebra::power(&x, p - 1.0, None).unwrap(),
        )
        .unwrap();
        let v = maximal_dual_bound(&[x.clone()], p, Some(&[y]), &SolverOptions::default())
            .unwrap();
        let ctx = TraceContext::new(2).unwrap();
        let norm =
            crate::algebra::schatten(x.matrix(), &ctx, &PExponent::new(p).unwrap()).unwrap();
        assert!((v - norm).abs() < 1e-9, "dual {v} norm {norm}");
    }

    #[test]
    fn zero_dual_tuple_is_skipped() {
        let x = pos(&[1.0, 1.0]);
        let y = pos(&[0.0, 0.0]);
        let v = maximal_dual_bound(&[x], 2.0, Some(&[y]), &SolverOptions::default()).unwrap();
        assert_eq!(v, 0.0);
    }

    #[test]
    fn infinity_norm_closed_form() {
        let xs = [pos(&[1.0, 0.5]), pos(&[0.25, 3.0])];
        let r = maximal_primal(&xs, f64::INFINITY, &SolverOptions::default()).unwrap();
        assert!((r.value - 3.0).abs() < 1e-12);
        assert!(r.gap.abs() < 1e-10, "gap {}", r.gap);
        assert!(r.converged);
    }

    #[test]
    fn rejects_p_below_two() {
        let err = maximal_primal(&[pos(&[1.0])], 1.5, &SolverOptions::default()).unwrap_err();
        assert!(matches!(err, MaximalError::OutsideRange { .. }));
    }
}
