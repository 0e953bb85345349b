//! The two sharp dual Doob inequalities and their step-level proof traces.
//!
//! With `A_n = sum_k x_k` and `B_n = sum_k E_k(x_k)` the downward direction
//! bounds `||A_n||_p <= (1/p) ||B_n||_p` for `0 < p <= 1` and the upward
//! direction bounds `||B_n||_p <= p ||A_n||_p` for `1 <= p <= 2`.

use crate::algebra::{eigh, Eigh, HermitianMatrix, TraceContext};
use crate::filtration::{cond_exp, OperatorSequence, Tower};

use super::{IneqReport, InequalityError, StepTrace, TraceStep};

/// Regularization factor for traces on singular partial sums.
const CHAIN_EPS_FACTOR: f64 = 1e-10;

/// Partial sums `A_k = sum_{j<=k} x_j` and `B_k = sum_{j<=k} E_j(x_j)`.
pub(crate) struct DoobChain {
    pub a: Vec<HermitianMatrix>,
    pub b: Vec<HermitianMatrix>,
    pub ctx: TraceContext,
}

pub(crate) fn doob_chain(tower: &Tower, xs: &OperatorSequence) -> Result<DoobChain, InequalityError> {
    if xs.len() != tower.len() {
        return Err(InequalityError::LengthMismatch { xs: xs.len(), tower: tower.len() });
    }
    xs.check_against(tower)?;
    let dim = tower.dim();
    let mut a = Vec::with_capacity(xs.len());
    let mut b = Vec::with_capacity(xs.len());
    let mut a_run = HermitianMatrix::zero(dim);
    let mut b_run = HermitianMatrix::zero(dim);
    for (k, x) in xs.xs().iter().enumerate() {
        a_run = a_run.add(x.matrix());
        b_run = b_run.add(&cond_exp(tower.spec(k), x.matrix())?);
        a.push(a_run.clone());
        b.push(b_run.clone());
    }
    Ok(DoobChain { a, b, ctx: TraceContext::new(dim).expect("dim > 0") })
}

/// Schatten norm of a PSD matrix from a precomputed eigendecomposition, with
/// eigenvalues clamped at zero and an optional uniform shift.
fn psd_norm_from_eigh(e: &Eigh, p: f64, shift: f64, ctx: &TraceContext) -> f64 {
    let sum: f64 = e.eigenvalues.iter().map(|&l| (l.max(0.0) + shift).powf(p)).sum();
    (sum * ctx.normalization()).powf(1.0 / p)
}

fn tau_power(e: &Eigh, p: f64, shift: f64, ctx: &TraceContext) -> f64 {
    let sum: f64 = e.eigenvalues.iter().map(|&l| (l.max(0.0) + shift).powf(p)).sum();
    sum * ctx.normalization()
}

fn shifted_power(e: &Eigh, r: f64, shift: f64) -> HermitianMatrix {
    e.apply(|l| (l.max(0.0) + shift).powf(r))
}

/// Computes both dual Doob reports for one instance. Outside an exponent's
/// validity range the corresponding report carries `constant = NaN` and the
/// `no_bound_claimed` flag.
pub fn dual_doob_report(
    tower: &Tower,
    xs: &OperatorSequence,
    p: f64,
) -> Result<(IneqReport, IneqReport), InequalityError> {
    let chain = doob_chain(tower, xs)?;
    let ctx = chain.ctx;
    let a_n = chain.a.last().expect("nonempty");
    let b_n = chain.b.last().expect("nonempty");
    let ea = eigh(a_n)?;
    let eb = eigh(b_n)?;
    let norm_a = psd_norm_from_eigh(&ea, p, 0.0, &ctx);
    let norm_b = psd_norm_from_eigh(&eb, p, 0.0, &ctx);

    let down_const = if p > 0.0 && p <= 1.0 { 1.0 / p } else { f64::NAN };
    let up_const = if (1.0..=2.0).contains(&p) { p } else { f64::NAN };

    let down = IneqReport::new("dd_down", p, norm_a, norm_b, down_const)?;
    let up = IneqReport::new("dd_up", p, norm_b, norm_a, up_const)?;
    Ok((down, up))
}

/// `||sum x_k||_p / ||sum E_k(x_k)||_p`, the quantity bounded by `1/p`.
pub fn dual_doob_ratio_down(
    tower: &Tower,
    xs: &OperatorSequence,
    p: f64,
) -> Result<f64, InequalityError> {
    Ok(dual_doob_report(tower, xs, p)?.0.ratio)
}

/// `||sum E_k(x_k)||_p / ||sum x_k||_p`, the quantity bounded by `p`.
pub fn dual_doob_ratio_up(
    tower: &Tower,
    xs: &OperatorSequence,
    p: f64,
) -> Result<f64, InequalityError> {
    Ok(dual_doob_report(tower, xs, p)?.1.ratio)
}

struct RegularizedChain {
    eighs_b: Vec<Eigh>,
    eps: f64,
}

/// Decides the uniform shift for powers of the partial sums: zero when every
/// `B_k` is strictly positive definite beyond the candidate epsilon,
/// otherwise the candidate. The shifted chain `B_k + eps I` keeps the order
/// `B_{k-1} + eps I <= B_k + eps I` and the differences unchanged, so every
/// step inequality remains valid verbatim.
fn regularize(chain: &DoobChain) -> Result<RegularizedChain, InequalityError> {
    let mut eighs_b = Vec::with_capacity(chain.b.len());
    for b in &chain.b {
        eighs_b.push(eigh(b)?);
    }
    let max_norm = eighs_b.iter().map(|e| e.spectral_norm()).fold(0.0, f64::max);
    let candidate = CHAIN_EPS_FACTOR * (1.0 + max_norm);
    let all_pd = eighs_b.iter().all(|e| e.min_eig() > candidate);
    let eps = if all_pd { 0.0 } else { candidate };
    for (k, e) in eighs_b.iter().enumerate() {
        if e.min_eig().max(0.0) + eps <= 0.0 {
            return Err(InequalityError::SingularChain { k: k + 1 });
        }
    }
    Ok(RegularizedChain { eighs_b, eps })
}

/// Proof trace for the downward inequality, `0 < p < 1`. The three steps are
/// chained (each right side is the next left side) so their slacks add up to
/// the theorem slack `(1/p) ||B_n||_p - ||A_n||_p` when no regularization is
/// active:
///
/// 1. `||A_n||_p <= ||B_n||_p^{1-p} tau(A_n B_n^{p-1})`,
/// 2. `tau(A_n B_n^{p-1}) <= sum_k tau([B_k - B_{k-1}] B_k^{p-1})`,
/// 3. `sum_k tau(...) <= (1/p) sum_k tau(B_k^p - B_{k-1}^p) = (1/p) ||B_n||_p^p`,
///
/// the latter two scaled by the prefactor `||B_n||_p^{1-p}`.
pub fn proof_trace_thm11(
    tower: &Tower,
    xs: &OperatorSequence,
    p: f64,
) -> Result<StepTrace, InequalityError> {
    if !(p > 0.0 && p < 1.0) {
        return Err(InequalityError::OutsideProofRange { p, lo: 0.0, hi: 1.0 });
    }
    let chain = doob_chain(tower, xs)?;
    let ctx = chain.ctx;
    let reg = regularize(&chain)?;
    let eps = reg.eps;
    let n = chain.b.len();

    let ea = eigh(chain.a.last().expect("nonempty"))?;
    let norm_a = psd_norm_from_eigh(&ea, p, 0.0, &ctx);

    let tau_bn_p = tau_power(&reg.eighs_b[n - 1], p, eps, &ctx);
    let norm_bn = tau_bn_p.powf(1.0 / p);
    let prefactor = norm_bn.powf(1.0 - p);

    // tau(A_n b_n^{p-1}) with the shifted power.
    let pow_bn = shifted_power(&reg.eighs_b[n - 1], p - 1.0, eps);
    let t_linear = ctx.tau_product(chain.a.last().unwrap(), &pow_bn);

    // sum_k tau([B_k - B_{k-1}] b_k^{p-1}).
    let mut telescope = 0.0;
    let zero = HermitianMatrix::zero(tower.dim());
    for k in 0..n {
        let prev = if k == 0 { &zero } else { &chain.b[k - 1] };
        let diff = chain.b[k].sub(prev);
        let pow_bk = shifted_power(&reg.eighs_b[k], p - 1.0, eps);
        telescope += ctx.tau_product(&diff, &pow_bk);
    }

    // (1/p) sum_k tau(b_k^p - b_{k-1}^p) = (1/p) (tau(b_n^p) - tau(b_0^p)).
    let tau_b0_p = if eps > 0.0 { eps.powf(p) } else { 0.0 };
    let power_mean = (tau_bn_p - tau_b0_p) / p;

    let l0 = norm_a;
    let l1 = prefactor * t_linear;
    let l2 = prefactor * telescope;
    let l3 = prefactor * power_mean;

    let trace = StepTrace::new(vec![
        TraceStep::new("norm-linearization", "holder-split", l0, l1),
        TraceStep::new("telescope-order-reversal", "antitone-negative-power", l1, l2),
        TraceStep::new("power-difference-bound", "young-power-mean", l2, l3),
    ])
    .with_param("p", p)
    .with_param("epsilon", eps)
    .with_param("prefactor", prefactor);
    Ok(trace)
}

/// Proof trace for the upward inequality, `1 <= p <= 2`. Four chained steps,
/// scaled by `||B_n||_p^{-(p-1)}` so the composed slack is the theorem slack
/// `p ||A_n||_p - ||B_n||_p`:
///
/// 1. `tau(B_n^p) <= p sum_k tau([B_k - B_{k-1}] B_k^{p-1})`,
/// 2. `= p sum_k tau(x_k B_k^{p-1})` (conditional-expectation duality),
/// 3. `<= p sum_k tau(x_k B_n^{p-1}) = p tau(A_n B_n^{p-1})` (needs
///    `p - 1` in `[0, 1]`, which is why `p > 2` is rejected),
/// 4. `<= p ||A_n||_p ||B_n||_p^{p-1}`.
pub fn proof_trace_thm12(
    tower: &Tower,
    xs: &OperatorSequence,
    p: f64,
) -> Result<StepTrace, InequalityError> {
    if !(1.0..=2.0).contains(&p) {
        return Err(InequalityError::OutsideProofRange { p, lo: 1.0, hi: 2.0 });
    }
    let chain = doob_chain(tower, xs)?;
    let ctx = chain.ctx;
    let reg = regularize(&chain)?;
    let eps = reg.eps;
    let n = chain.b.len();

    let ea = eigh(chain.a.last().expect("nonempty"))?;
    let norm_a = psd_norm_from_eigh(&ea, p, 0.0, &ctx);

    let tau_bn_p = tau_power(&reg.eighs_b[n - 1], p, eps, &ctx);
    let norm_bn = tau_bn_p.powf(1.0 / p);
    if norm_bn == 0.0 {
        // All-zero instance: every quantity vanishes.
        return Ok(StepTrace::new(vec![
            TraceStep::new("power-difference-bound", "young-holder", 0.0, 0.0),
            TraceStep::new("conditional-identity", "trace-module-property", 0.0, 0.0),
            TraceStep::new("power-order-monotonicity", "loewner-heinz", 0.0, 0.0),
            TraceStep::new("holder-factorization", "holder", 0.0, 0.0),
        ])
        .with_param("p", p)
        .with_param("epsilon", eps));
    }
    let weight = norm_bn.powf(-(p - 1.0));

    let pow_bn = shifted_power(&reg.eighs_b[n - 1], p - 1.0, eps);
    let zero = HermitianMatrix::zero(tower.dim());

    let mut telescope = 0.0; // sum_k tau([B_k - B_{k-1}] b_k^{p-1})
    let mut measured = 0.0; // sum_k tau(x_k b_k^{p-1})
    let mut relaxed = 0.0; // sum_k tau(x_k b_n^{p-1})
    for k in 0..n {
        let prev = if k == 0 { &zero } else { &chain.b[k - 1] };
        let diff = chain.b[k].sub(prev);
        let pow_bk = shifted_power(&reg.eighs_b[k], p - 1.0, eps);
        telescope += ctx.tau_product(&diff, &pow_bk);
        measured += ctx.tau_product(xs.xs()[k].matrix(), &pow_bk);
        relaxed += ctx.tau_product(xs.xs()[k].matrix(), &pow_bn);
    }

    let u0 = weight * tau_bn_p; // = ||B_n||_p
    let u1 = weight * p * telescope;
    let u2 = weight * p * measured;
    let u3 = weight * p * relaxed;
    let u4 = p * norm_a;

    let trace = StepTrace::new(vec![
        TraceStep::new("power-difference-bound", "young-holder", u0, u1),
        TraceStep::new("conditional-identity", "trace-module-property", u1, u2),
        TraceStep::new("power-order-monotonicity", "loewner-heinz", u2, u3),
        TraceStep::new("holder-factorization", "holder", u3, u4),
    ])
    .with_param("p", p)
    .with_param("epsilon", eps)
    .with_param("weight", weight);
    Ok(trace)
}

/// The closed-form reference instance: two-step classical tower on dim 2
/// with `x_1 = diag(1, 0)`, `x_2 = diag(0, 1)`, so `A_2 = I` and
/// `B_2 = diag(1/2, 3/2)`. At `p = 1/2` the down-ratio is
/// `((sqrt(1/2) + sqrt(3/2)) / 2)^{-2} = 1.0717967...`, strictly above 1 yet
/// below the bound `1/p = 2`.
pub fn canonical_dd_instance() -> (Tower, OperatorSequence) {
    use crate::algebra::PositiveOperator;
    use crate::filtration::{preset_tower, TowerPreset};
    let tower = preset_tower(TowerPreset::DyadicScalar { levels: 1 }, 2).expect("valid preset");
    let xs = OperatorSequence::new(vec![
        PositiveOperator::new(HermitianMatrix::diag(&[1.0, 0.0])).expect("psd"),
        PositiveOperator::new(HermitianMatrix::diag(&[0.0, 1.0])).expect("psd"),
    ])
    .expect("consistent dims");
    (tower, xs)
}
