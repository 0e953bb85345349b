//! Both sides of every inequality in scope, reported with ratios and slacks,
//! plus step-level proof traces.
//!
//! Conventions shared by all reports:
//! - `ratio = lhs / rhs`, with `0/0 -> 0` (flagged in `params`); a vanishing
//!   right side with a positive left side is an error (it cannot happen for
//!   strictly positive inputs).
//! - `slack = constant * rhs - lhs`; a verified instance has `slack >= -tol`.
//! - Outside an inequality's validity range the report is still emitted, with
//!   `constant = NaN` and the `no_bound_claimed` flag set in `params`.

mod dual_doob;
mod lemmas;
mod square;

pub use dual_doob::{
    canonical_dd_instance, dual_doob_ratio_down, dual_doob_ratio_up, dual_doob_report,
    proof_trace_thm11, proof_trace_thm12,
};
pub use lemmas::{lemma_slacks, LemmaSlacks, SlackOutcome};
pub use square::{
    bg_constant, bg_ratio, bg_report, cor13_ratio_a, cor13_ratio_b, cor13_report,
    square_functions, stein_constant, stein_ratio, stein_report, SquareFunctions,
};

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::algebra::AlgebraError;
use crate::filtration::FiltrationError;

#[derive(Debug, Error)]
pub enum InequalityError {
    #[error("sequence/tower length mismatch: {xs} vs {tower}")]
    LengthMismatch { xs: usize, tower: usize },

    #[error("p = {p} is outside the proof's validity range [{lo}, {hi}]")]
    OutsideProofRange { p: f64, lo: f64, hi: f64 },

    #[error("p = {p} is outside the inequality's range [{lo}, {hi}]")]
    OutsideRange { p: f64, lo: f64, hi: f64 },

    #[error("partial sum {k} stayed singular after regularization")]
    SingularChain { k: usize },

    #[error("order hypothesis a <= b violated: min eigenvalue of b - a is {min_gap_eig:.3e}")]
    OrderViolation { min_gap_eig: f64 },

    #[error("right-hand side vanishes while the left-hand side is {lhs:.3e}")]
    RatioUndefined { lhs: f64 },

    #[error("horizon {n} exceeds tower length {tower}")]
    BadHorizon { n: usize, tower: usize },

    #[error(transparent)]
    Algebra(#[from] AlgebraError),

    #[error(transparent)]
    Filtration(#[from] FiltrationError),
}

/// One inequality instance: both sides, the constant, and derived ratio and
/// slack. `params` carries free-form metadata (flags, tolerances,
/// regularization constants).
#[derive(Debug, Clone, Serialize)]
pub struct IneqReport {
    pub name: String,
    pub p: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub constant: f64,
    pub ratio: f64,
    pub slack: f64,
    pub params: BTreeMap<String, String>,
}

impl IneqReport {
    /// Builds a report, applying the ratio conventions. `constant` may be
    /// NaN for a flagged no-bound report; slack is then NaN as well.
    pub fn new(
        name: impl Into<String>,
        p: f64,
        lhs: f64,
        rhs: f64,
        constant: f64,
    ) -> Result<Self, InequalityError> {
        let mut params = BTreeMap::new();
        let ratio = if rhs == 0.0 {
            if lhs == 0.0 {
                params.insert("ratio_convention".into(), "0/0 -> 0".into());
                0.0
            } else {
                return Err(InequalityError::RatioUndefined { lhs });
            }
        } else {
            lhs / rhs
        };
        let slack = constant * rhs - lhs;
        if constant.is_nan() {
            params.insert("no_bound_claimed".into(), "true".into());
        }
        Ok(Self { name: name.into(), p, lhs, rhs, constant, ratio, slack, params })
    }

    pub fn with_param(mut self, key: &str, value: impl ToString) -> Self {
        self.params.insert(key.into(), value.to_string());
        self
    }

    /// True when this report claims a bound (in-range constant).
    pub fn claims_bound(&self) -> bool {
        !self.constant.is_nan()
    }
}

/// One step of a proof trace. Steps are chained: each step's `lhs` is the
/// previous step's `rhs`, so slacks are additive along the trace.
#[derive(Debug, Clone, Serialize)]
pub struct TraceStep {
    pub label: String,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub anchor: String,
}

impl TraceStep {
    pub fn new(label: &str, anchor: &str, lhs: f64, rhs: f64) -> Self {
        Self { label: label.into(), lhs, rhs, slack: rhs - lhs, anchor: anchor.into() }
    }
}

/// A chain of proof steps for one theorem instance.
#[derive(Debug, Clone, Serialize)]
pub struct StepTrace {
    pub steps: Vec<TraceStep>,
    pub params: BTreeMap<String, String>,
}

impl StepTrace {
    pub fn new(steps: Vec<TraceStep>) -> Self {
        Self { steps, params: BTreeMap::new() }
    }

    pub fn with_param(mut self, key: &str, value: impl ToString) -> Self {
        self.params.insert(key.into(), value.to_string());
        self
    }

    pub fn min_slack(&self) -> f64 {
        self.steps.iter().map(|s| s.slack).fold(f64::INFINITY, f64::min)
    }

    /// Sum of step slacks; for the chained dual Doob traces this reproduces
    /// the theorem slack.
    pub fn composed_slack(&self) -> f64 {
        self.steps.iter().map(|s| s.slack).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratio_conventions() {
        let r = IneqReport::new("t", 1.0, 0.0, 0.0, 2.0).unwrap();
        assert_eq!(r.ratio, 0.0);
        assert!(r.params.contains_key("ratio_convention"));

        let err = IneqReport::new("t", 1.0, 1.0, 0.0, 2.0).unwrap_err();
        assert!(matches!(err, InequalityError::RatioUndefined { .. }));

        let r = IneqReport::new("t", 1.0, 1.0, 2.0, f64::NAN).unwrap();
        assert!(!r.claims_bound());
        assert!(r.slack.is_nan());
        assert!(r.params.contains_key("no_bound_claimed"));
    }

    #[test]
    fn trace_slacks_add() {
        let t = StepTrace::new(vec![
            TraceStep::new("a", "x", 1.0, 1.5),
            TraceStep::new("b", "y", 1.5, 2.0),
        ]);
        assert!((t.composed_slack() - 1.0).abs() < 1e-15);
        assert!((t.min_slack() - 0.5).abs() < 1e-15);
    }
}
