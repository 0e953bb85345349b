//! Square functions and the derived inequalities: the two-sided comparison
//! between plain and conditioned square functions, the Burkholder-Gundy
//! bound, and the Stein inequality for general (non-Hermitian) inputs.
//!
//! Conventions: the first martingale increment is `E_1(x)` itself, and
//! wherever the map `E_{k-1}` must be applied at `k = 1` the map `E_1` is
//! used instead. The horizon `N` counts tower steps, `1 <= N <= tower len`.

use crate::algebra::{
    eigh, schatten, Eigh, GeneralMatrix, HermitianMatrix, PExponent, PositiveOperator,
    TraceContext,
};
use crate::filtration::{cond_exp, cond_exp_general, Tower};

use super::{IneqReport, InequalityError, StepTrace, TraceStep};

/// Column / row square functions and their conditioned variants at a fixed
/// horizon.
#[derive(Debug, Clone)]
pub struct SquareFunctions {
    /// `S_c = (sum_k |d_k|^2)^{1/2}` with `|z|^2 = z* z`.
    pub col: PositiveOperator,
    /// `s_c = (|E_1 x|^2 + sum_{k>=2} E_{k-1}(|d_k|^2))^{1/2}`.
    pub col_conditioned: PositiveOperator,
    /// Row variant, `|z|^2` replaced by `z z*`.
    pub row: PositiveOperator,
    pub row_conditioned: PositiveOperator,
}

/// Martingale increments `d_1 = E_1(x)`, `d_k = E_k(x) - E_{k-1}(x)`.
fn increments(
    tower: &Tower,
    x: &HermitianMatrix,
    n: usize,
) -> Result<Vec<HermitianMatrix>, InequalityError> {
    let mut out = Vec::with_capacity(n);
    let mut prev: Option<HermitianMatrix> = None;
    for k in 0..n {
        let ek = cond_exp(tower.spec(k), x)?;
        out.push(match &prev {
            None => ek.clone(),
            Some(p) => ek.sub(p),
        });
        prev = Some(ek);
    }
    Ok(out)
}

fn check_horizon(tower: &Tower, n: usize) -> Result<(), InequalityError> {
    if n == 0 || n > tower.len() {
        return Err(InequalityError::BadHorizon { n, tower: tower.len() });
    }
    Ok(())
}

/// Square root of a PSD accumulation, clamping rounding negatives.
fn psd_sqrt(sq: &HermitianMatrix) -> Result<PositiveOperator, InequalityError> {
    let e = eigh(sq)?;
    let root = e.apply(|l| l.max(0.0).sqrt());
    Ok(PositiveOperator::new(root)?)
}

pub fn square_functions(
    tower: &Tower,
    x: &HermitianMatrix,
    n: usize,
) -> Result<SquareFunctions, InequalityError> {
    check_horizon(tower, n)?;
    if x.dim() != tower.dim() {
        return Err(InequalityError::Algebra(crate::algebra::AlgebraError::DimensionMismatch {
            left: x.dim(),
            right: tower.dim(),
        }));
    }
    let d = tower.dim();
    let dx = increments(tower, x, n)?;

    let mut col_sq = HermitianMatrix::zero(d);
    let mut row_sq = HermitianMatrix::zero(d);
    let mut col_cond_sq = HermitianMatrix::zero(d);
    let mut row_cond_sq = HermitianMatrix::zero(d);
    for (k, inc) in dx.iter().enumerate() {
        let g = inc.as_general();
        let csq = g.abs_squared(); // z* z
        let rsq = (g * &g.adjoint()).hermitian_part(); // z z*
        col_sq = col_sq.add(&csq);
        row_sq = row_sq.add(&rsq);
        if k == 0 {
            // First term enters unconditioned (it is already E_1-measurable).
            col_cond_sq = col_cond_sq.add(&csq);
            row_cond_sq = row_cond_sq.add(&rsq);
        } else {
            col_cond_sq = col_cond_sq.add(&cond_exp(tower.spec(k - 1), &csq)?);
            row_cond_sq = row_cond_sq.add(&cond_exp(tower.spec(k - 1), &rsq)?);
        }
    }

    Ok(SquareFunctions {
        col: psd_sqrt(&col_sq)?,
        col_conditioned: psd_sqrt(&col_cond_sq)?,
        row: psd_sqrt(&row_sq)?,
        row_conditioned: psd_sqrt(&row_cond_sq)?,
    })
}

/// Two-sided square-function comparison:
/// `||S_c||_p <= sqrt(2/p) ||s_c||_p` for `0 < p <= 2` and
/// `||s_c||_p <= sqrt(p/2) ||S_c||_p` for `2 <= p <= 4`. Both directions are
/// reported; the out-of-range one is flagged with a NaN constant.
pub fn cor13_report(
    tower: &Tower,
    x: &HermitianMatrix,
    p: f64,
    n: usize,
) -> Result<(IneqReport, IneqReport), InequalityError> {
    let sf = square_functions(tower, x, n)?;
    let ctx = TraceContext::new(tower.dim()).expect("dim > 0");
    let pe = PExponent::new(p)?;
    let norm_s = schatten(sf.col.matrix(), &ctx, &pe)?;
    let norm_s_cond = schatten(sf.col_conditioned.matrix(), &ctx, &pe)?;

    let const_a = if p > 0.0 && p <= 2.0 { (2.0 / p).sqrt() } else { f64::NAN };
    let const_b = if (2.0..=4.0).contains(&p) { (p / 2.0).sqrt() } else { f64::NAN };

    let a = IneqReport::new("cor13_a", p, norm_s, norm_s_cond, const_a)?;
    let b = IneqReport::new("cor13_b", p, norm_s_cond, norm_s, const_b)?;
    Ok((a, b))
}

pub fn cor13_ratio_a(
    tower: &Tower,
    x: &HermitianMatrix,
    p: f64,
    n: usize,
) -> Result<f64, InequalityError> {
    Ok(cor13_report(tower, x, p, n)?.0.ratio)
}

pub fn cor13_ratio_b(
    tower: &Tower,
    x: &HermitianMatrix,
    p: f64,
    n: usize,
) -> Result<f64, InequalityError> {
    Ok(cor13_report(tower, x, p, n)?.1.ratio)
}

/// Burkholder-Gundy constant `c_p = (2 p^2 / (p - 2))^{1/2}` for `2 < p <= 4`.
pub fn bg_constant(p: f64) -> f64 {
    (2.0 * p * p / (p - 2.0)).sqrt()
}

/// Burkholder-Gundy bound `||S_{c,N}(x)||_p <= c_p ||x||_p` for `2 < p <= 4`,
/// with a step trace over the proof's intermediate estimates:
///
/// 1. the power-difference bound on `tau(S_N^p)` along the square chain,
/// 2. the Abel resummation / conditional-expectation identity (an equality),
/// 3. the operator bound `E_j(S_N^2 - S_{j-1}^2) <= 2 E_j(|x|^2) + 2 E_{j-1}(|x|^2)`,
/// 4. positivity of `S_j^{p-2} - S_{j-1}^{p-2}` (power monotonicity with
///    exponent `(p-2)/2 <= 1`),
/// 5. the closing Hoelder plus dual Doob estimate.
///
/// Operator-order steps are reported with `lhs` the worst eigenvalue
/// violation and `rhs = 0`.
pub fn bg_report(
    tower: &Tower,
    x: &HermitianMatrix,
    p: f64,
    n: usize,
) -> Result<(IneqReport, StepTrace), InequalityError> {
    if !(p > 2.0 && p <= 4.0) {
        return Err(InequalityError::OutsideRange { p, lo: 2.0, hi: 4.0 });
    }
    check_horizon(tower, n)?;
    let d = tower.dim();
    let ctx = TraceContext::new(d).expect("dim > 0");
    let dx = increments(tower, x, n)?;

    // Square chain S^2_{c,j}, j = 0..=n, with eigendecompositions.
    let mut sq_chain: Vec<HermitianMatrix> = Vec::with_capacity(n + 1);
    sq_chain.push(HermitianMatrix::zero(d));
    for inc in &dx {
        let next = sq_chain.last().unwrap().add(&inc.as_general().abs_squared());
        sq_chain.push(next);
    }
    let eighs: Vec<Eigh> = sq_chain.iter().map(eigh).collect::<Result<_, _>>()?;

    let q = p / 2.0;
    let r = (p - 2.0) / 2.0;
    let tau_pow = |e: &Eigh, expo: f64| -> f64 {
        e.eigenvalues.iter().map(|&l| l.max(0.0).powf(expo)).sum::<f64>() * ctx.normalization()
    };
    // S_j^{p-2} = (S_j^2)^{(p-2)/2}.
    let pow_chain: Vec<HermitianMatrix> =
        eighs.iter().map(|e| e.apply(|l| l.max(0.0).powf(r))).collect();

    let tau_s_p = tau_pow(&eighs[n], q);
    let norm_s = tau_s_p.powf(1.0 / p);
    let norm_x = schatten(x, &ctx, &PExponent::new(p)?)?;

    // Step 1: tau(S_N^p) <= (p/2) sum_k tau([S_k^2 - S_{k-1}^2] S_k^{p-2}).
    let mut chain_bound = 0.0;
    for k in 1..=n {
        let diff = sq_chain[k].sub(&sq_chain[k - 1]);
        chain_bound += ctx.tau_product(&diff, &pow_chain[k]);
    }
    let step1_rhs = q * chain_bound;

    // Conditioned tails m_j = E_j(S_N^2 - S_{j-1}^2) and increments
    // delta_j = S_j^{p-2} - S_{j-1}^{p-2}.
    let mut resummed = 0.0;
    let mut worst_tail_violation = f64::NEG_INFINITY;
    let mut worst_monotonicity = f64::INFINITY;
    let x_sq = x.as_general().abs_squared();
    for j in 1..=n {
        let tail = sq_chain[n].sub(&sq_chain[j - 1]);
        let m_j = cond_exp(tower.spec(j - 1), &tail)?;
        let delta_j = pow_chain[j].sub(&pow_chain[j - 1]);
        resummed += ctx.tau_product(&m_j, &delta_j);

        // E_j(|x|^2) and E_{j-1}(|x|^2), with E_0 := E_1.
        let ej_xsq = cond_exp(tower.spec(j - 1), &x_sq)?;
        let ejm1_xsq = if j == 1 { ej_xsq.clone() } else { cond_exp(tower.spec(j - 2), &x_sq)? };
        let bound = ej_xsq.scale(2.0).add(&ejm1_xsq.scale(2.0));
        let violation = eigh(&m_j.sub(&bound))?.max_eig();
        worst_tail_violation = worst_tail_violation.max(violation);

        worst_monotonicity = worst_monotonicity.min(eigh(&delta_j)?.min_eig());
    }
    let step2_rhs = q * resummed;

    // Step 5: tau(S_N^p) <= c_p^2 ||x||_p^2 ||S_N||_p^{p-2}.
    let closing = bg_constant(p).powi(2) * norm_x * norm_x * norm_s.powf(p - 2.0);

    let trace = StepTrace::new(vec![
        TraceStep::new("power-difference-bound", "young-power-mean", tau_s_p, step1_rhs),
        TraceStep::new("abel-conditional-identity", "trace-module-property", step1_rhs, step2_rhs),
        TraceStep::new("conditional-square-bound", "kadison-parallelogram", worst_tail_violation, 0.0),
        TraceStep::new("spectral-monotonicity", "loewner-heinz", -worst_monotonicity, 0.0),
        TraceStep::new("holder-dual-doob-closure", "holder", tau_s_p, closing),
    ])
    .with_param("p", p)
    .with_param("horizon", n);

    let report = IneqReport::new("bg", p, norm_s, norm_x, bg_constant(p))?;
    Ok((report, trace))
}

pub fn bg_ratio(
    tower: &Tower,
    x: &HermitianMatrix,
    p: f64,
    n: usize,
) -> Result<f64, InequalityError> {
    Ok(bg_report(tower, x, p, n)?.0.ratio)
}

/// Stein constant `sqrt(p / (2 min(p-1, 1)))` for `4/3 <= p <= 4`.
pub fn stein_constant(p: f64) -> f64 {
    (p / (2.0 * (p - 1.0).min(1.0))).sqrt()
}

/// `||(sum_k |E_k(x_k)|^2)^{1/2}||_p` vs `||(sum_k |x_k|^2)^{1/2}||_p` for
/// general (non-Hermitian) inputs, `4/3 <= p <= 4`.
pub fn stein_report(
    tower: &Tower,
    xs: &[GeneralMatrix],
    p: f64,
) -> Result<IneqReport, InequalityError> {
    if !(4.0 / 3.0..=4.0).contains(&p) {
        return Err(InequalityError::OutsideRange { p, lo: 4.0 / 3.0, hi: 4.0 });
    }
    if xs.len() != tower.len() {
        return Err(InequalityError::LengthMismatch { xs: xs.len(), tower: tower.len() });
    }
    let d = tower.dim();
    let ctx = TraceContext::new(d).expect("dim > 0");
    let mut lhs_sq = HermitianMatrix::zero(d);
    let mut rhs_sq = HermitianMatrix::zero(d);
    for (k, x) in xs.iter().enumerate() {
        if x.dim() != d {
            return Err(InequalityError::Algebra(
                crate::algebra::AlgebraError::DimensionMismatch { left: x.dim(), right: d },
            ));
        }
        let ek = cond_exp_general(tower.spec(k), x)?;
        lhs_sq = lhs_sq.add(&ek.abs_squared());
        rhs_sq = rhs_sq.add(&x.abs_squared());
    }
    // ||(m)^{1/2}||_p = (tau(m^{p/2}))^{1/p} for PSD m.
    let sqrt_norm = |m: &HermitianMatrix| -> Result<f64, InequalityError> {
        let e = eigh(m)?;
        let sum: f64 = e.eigenvalues.iter().map(|&l| l.max(0.0).powf(p / 2.0)).sum();
        Ok((sum * ctx.normalization()).powf(1.0 / p))
    };
    let lhs = sqrt_norm(&lhs_sq)?;
    let rhs = sqrt_norm(&rhs_sq)?;
    Ok(IneqReport::new("stein", p, lhs, rhs, stein_constant(p))?)
}

pub fn stein_ratio(
    tower: &Tower,
    xs: &[GeneralMatrix],
    p: f64,
) -> Result<f64, InequalityError> {
    Ok(stein_report(tower, xs, p)?.ratio)
}
