//! Slack computations for the elementary trace inequalities the dual Doob
//! proofs are built from.
//!
//! For positive `a`, `b`:
//! - `slack21 = ||b||_p^{1-p} tau(a b^{p-1}) - ||a||_p` for `0 < p < 1`
//!   (strictly positive definite pair required);
//! - `slack22 = (1/p) tau(b^p - a^p) - tau((b - a) b^{p-1})` for
//!   `0 < p <= 1` and `a <= b`;
//! - `slack24 = p tau((b - a) b^{p-1}) - tau(b^p - a^p)` for `p >= 1` and
//!   `a <= b`.

use serde::Serialize;

use crate::algebra::{eigh, loewner_leq, PositiveOperator, TraceContext};

use super::InequalityError;

/// A slack value, or the reason it does not apply at this exponent / input.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SlackOutcome {
    Value(f64),
    NotApplicable(String),
}

impl SlackOutcome {
    pub fn value(&self) -> Option<f64> {
        match self {
            SlackOutcome::Value(v) => Some(*v),
            SlackOutcome::NotApplicable(_) => None,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LemmaSlacks {
    pub p: f64,
    pub slack21: SlackOutcome,
    pub slack22: SlackOutcome,
    pub slack24: SlackOutcome,
    /// Smallest eigenvalue of `b - a`, the order certificate.
    pub order_gap: f64,
}

/// Order tolerance for the `a <= b` hypothesis.
const ORDER_TOL: f64 = 1e-10;

pub fn lemma_slacks(
    a: &PositiveOperator,
    b: &PositiveOperator,
    p: f64,
) -> Result<LemmaSlacks, InequalityError> {
    let (ordered, order_gap) = loewner_leq(a.matrix(), b.matrix(), ORDER_TOL)?;
    if !ordered {
        return Err(InequalityError::OrderViolation { min_gap_eig: order_gap });
    }
    let ctx = TraceContext::new(a.dim()).expect("dim > 0");
    let ea = eigh(a.matrix())?;
    let eb = eigh(b.matrix())?;

    let tau_pow = |e: &crate::algebra::Eigh, q: f64| -> f64 {
        e.eigenvalues.iter().map(|&l| l.max(0.0).powf(q)).sum::<f64>() * ctx.normalization()
    };

    let slack21 = if !(p > 0.0 && p < 1.0) {
        SlackOutcome::NotApplicable(format!("requires 0 < p < 1, got {p}"))
    } else if a.min_eig() <= 0.0 || b.min_eig() <= 0.0 {
        SlackOutcome::NotApplicable("requires strictly positive definite a and b".into())
    } else {
        let norm_b = tau_pow(&eb, p).powf(1.0 / p);
        let norm_a = tau_pow(&ea, p).powf(1.0 / p);
        let b_pow = eb.apply(|l| l.max(0.0).powf(p - 1.0));
        let linear = ctx.tau_product(a.matrix(), &b_pow);
        SlackOutcome::Value(norm_b.powf(1.0 - p) * linear - norm_a)
    };

    // b^{p-1} on the support; valid for the ordered pairs fed to 2.2 / 2.4
    // because a <= b confines a to the support of b.
    let support_tol = 1e-14 * (1.0 + eb.spectral_norm());
    let b_pow = eb.apply_on_support(|l| l.powf(p - 1.0), support_tol);
    let diff = b.matrix().sub(a.matrix());
    let linear_term = ctx.tau_product(&diff, &b_pow);
    let power_gap = tau_pow(&eb, p) - tau_pow(&ea, p);

    let slack22 = if p > 0.0 && p <= 1.0 {
        SlackOutcome::Value(power_gap / p - linear_term)
    } else {
        SlackOutcome::NotApplicable(format!("requires 0 < p <= 1, got {p}"))
    };

    let slack24 = if p >= 1.0 {
        SlackOutcome::Value(p * linear_term - power_gap)
    } else {
        SlackOutcome::NotApplicable(format!("requires p >= 1, got {p}"))
    };

    Ok(LemmaSlacks { p, slack21, slack22, slack24, order_gap })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::HermitianMatrix;

    fn pos(values: &[f64]) -> PositiveOperator {
        PositiveOperator::new(HermitianMatrix::diag(values)).unwrap()
    }

    #[test]
    fn equal_pair_has_zero_slack() {
        let a = pos(&[1.0, 2.0]);
        for p in [0.5, 1.0, 2.0] {
            let s = lemma_slacks(&a, &a, p).unwrap();
            if let Some(v) = s.slack22.value() {
                assert!(v.abs() < 1e-14, "p = {p}");
            }
            if let Some(v) = s.slack24.value() {
                assert!(v.abs() < 1e-14, "p = {p}");
            }
        }
    }

    #[test]
    fn scalar_pair_at_p_half() {
        // a = I, b = 2I: tau((b-a) b^{-1/2}) = 2^{-1/2},
        // (1/p) tau(b^p - a^p) = 2 (sqrt(2) - 1).
        let a = pos(&[1.0, 1.0]);
        let b = pos(&[2.0, 2.0]);
        let s = lemma_slacks(&a, &b, 0.5).unwrap();
        let lhs22 = 2.0f64.powf(-0.5);
        let rhs22 = 2.0 * (2.0f64.sqrt() - 1.0);
        let expected = rhs22 - lhs22;
        assert!((expected - 0.12132).abs() < 1e-5);
        let got = s.slack22.value().unwrap();
        assert!((got - expected).abs() < 1e-12, "got {got}");
        // Lemma 2.1 slack is applicable and nonnegative here.
        assert!(s.slack21.value().unwrap() >= -1e-12);
        assert!(s.slack24.value().is_none());
    }

    #[test]
    fn scalar_pair_at_p_two() {
        // a = I, b = 2I: tau(b^2 - a^2) = 3, p tau((b-a) b) = 4, slack 1.
        let a = pos(&[1.0, 1.0]);
        let b = pos(&[2.0, 2.0]);
        let s = lemma_slacks(&a, &b, 2.0).unwrap();
        let got = s.slack24.value().unwrap();
        assert!((got - 1.0).abs() < 1e-12, "got {got}");
        assert!(s.slack21.value().is_none());
        assert!(s.slack22.value().is_none());
    }

    #[test]
    fn order_violation_is_an_error() {
        let a = pos(&[2.0, 0.0]);
        let b = pos(&[1.0, 1.0]);
        let err = lemma_slacks(&a, &b, 0.5).unwrap_err();
        assert!(matches!(err, InequalityError::OrderViolation { .. }));
    }
}
