//! Small-divisor hypotheses for the effective Hamiltonians.

mod a01;
mod a2;
mod diophantine;
mod modes;

pub use a01::{a0_bound, check_a0, check_a1, A0Report, A1Entry, A1Kind, A1Report};
pub use a2::{
    check_a2, conservation_filter, conservation_filter_charged, measure_scan, A2Summary, A2Verdict, DivisorExpression,
    DivisorKind, HypothesisReport, VerdictEntry, Witness,
};
pub use diophantine::{conic_search, exact_linear_solve, ConicSolution, ConicSystem, LinearSolution, R128};
pub use modes::{block_modes, is_scalar, BlockMode, ModeLabel, Samples};
