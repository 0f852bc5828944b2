//! The algorithm suite for total-cost finite models: value iteration
//! with basin diagnostics, policy iteration with pluggable tie-breaking
//! and cycle detection, its optimistic variant, the vanishing-
//! perturbation method, a linear-programming solver, and weighted-norm
//! rate checks.
//!
//! Every iterative method returns a [`SolveTrace`]: the full iterate
//! history, per-iterate residuals, and an outcome that distinguishes
//! convergence, stalls (fixed-point starts and budget exhaustion),
//! cycles, and certified divergence. Nothing here assumes the model is
//! well behaved; the pathologies (stalls at non-optimal fixed points,
//! policy oscillation under bad tie-breaking, unbounded programs) are
//! first-class outcomes, because exposing them is half the job.

mod error;
mod linear_eval;
mod lp;
mod opi;
mod perturb;
mod pi;
mod rate;
mod trace;
mod vi;

pub use error::SolverError;
pub use lp::{lp_solve, BoundSide, LpSolution};
pub use opi::optimistic_pi;
pub use perturb::{perturbation_solve, PerturbationOutcome, PerturbationSchedule};
pub use pi::{policy_iteration, PolicyEvalMode, TieBreakRule};
pub use rate::{vi_rate_check, RateCheck};
pub use trace::{SolveOutcome, SolveTrace, DEFAULT_MAX_ITER, DEFAULT_SOLVE_TOL};
pub use vi::{
    value_iteration, value_iteration_with, vi_region_check, RegionProbe, ViOptions,
    ViRegionReport,
};
