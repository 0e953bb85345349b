//! Numerical laboratory for noncommutative martingale inequalities on
//! finite-dimensional matrix algebras.
//!
//! The model is the full algebra of complex `d x d` matrices with the
//! normalized trace `tau = Tr / d`, so `tau(1) = 1`. Increasing block
//! subalgebras play the role of a filtration, and their trace-preserving
//! conditional expectations are explicit pinching/averaging maps. On top of
//! that the crate computes both sides of the sharp dual Doob inequalities
//!
//! ```text
//! || sum_k x_k ||_p  <=  (1/p) || sum_k E_k(x_k) ||_p      (0 < p <= 1)
//! || sum_k E_k(x_k) ||_p  <=  p || sum_k x_k ||_p          (1 <= p <= 2)
//! ```
//!
//! together with the derived square-function, Burkholder-Gundy, Doob maximal
//! and Stein inequalities, step-level proof traces, a log-barrier solver for
//! the `L_p(M, l_inf)` maximal norm, and a seeded sharpness search.

pub mod algebra;
pub mod filtration;
pub mod inequalities;
pub mod maximal;
pub mod search;
pub mod util;

pub use algebra::{
    eigh, func_calc, loewner_leq, power, random_hermitian, random_psd, schatten, AlgebraError,
    Eigh, GeneralMatrix, HermitianMatrix, PExponent, PositiveOperator, TraceContext,
};
pub use filtration::{
    cond_exp, cond_exp_general, cond_exp_pos, preset_tower, random_tower, tower_from_json,
    tower_to_json, validate_tower, BlockTag, FiltrationError, OperatorSequence, SubalgebraSpec,
    Tower, TowerFamily, TowerPreset,
};
pub use inequalities::{
    bg_constant, bg_report, canonical_dd_instance, cor13_report, dual_doob_report, lemma_slacks,
    proof_trace_thm11, proof_trace_thm12, square_functions, stein_constant, stein_report,
    IneqReport, InequalityError, LemmaSlacks, SquareFunctions, StepTrace, TraceStep,
};
pub use maximal::{
    doob_report, maximal_dual_bound, maximal_primal, MaximalError, MaximalNormResult,
    SolverOptions,
};
pub use search::{
    evaluate_ratio, local_ascent, p_sweep, random_sweep, PSweepOutcome, SearchConfig,
    SearchError, SearchInstance, SearchRecord, TheoremKind, BOUND_VIOLATION_TOL,
};
