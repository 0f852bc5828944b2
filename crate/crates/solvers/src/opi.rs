//! Optimistic policy iteration: greedy policy extraction followed by a
//! bounded number of policy-operator applications, repeated.

use abstract_model::FiniteModel;
use extreal_core::{CostFunction, ExtendedReal};

use crate::error::SolverError;
use crate::trace::{SolveOutcome, SolveTrace};

/// Runs the two-step recursion: find a greedy policy at the current
/// iterate, apply its operator `m_k` times, repeat. The schedule
/// supplies `m_k` per round and its last entry repeats forever.
///
/// Requires `J0` at or above its own one-step image componentwise
/// (within `tol`); started there the iterates decrease monotonically
/// and the residual check is meaningful. `Converged` asserts only that
/// the limit is a fixed point of the optimal operator, not that it is
/// any particular optimum: a fixed-point start reports itself
/// immediately with a constant trace.
///
/// `iterations` counts rounds, each beginning with one greedy
/// application; a run that starts on a fixed point performs exactly one.
pub fn optimistic_pi(
    model: &FiniteModel,
    j0: &CostFunction,
    m_schedule: &[usize],
    tol: f64,
    max_iter: usize,
) -> Result<SolveTrace, SolverError> {
    assert!(tol > 0.0 && tol.is_finite(), "tol must be positive");
    assert_eq!(j0.len(), model.n_states(), "start length mismatch");
    if m_schedule.is_empty() || m_schedule.contains(&0) {
        return Err(SolverError::BadSchedule);
    }

    let tol_e = ExtendedReal::new(tol);
    let (tj0, _) = model.apply_t(j0);
    for x in 0..model.n_states() {
        let above = j0[x] >= tj0[x] || j0[x].abs_diff(tj0[x]) <= tol_e;
        if !above {
            return Err(SolverError::NotAboveOperator { state: x });
        }
    }

    let mut iterates = Vec::new();
    let mut residuals = Vec::new();
    let mut policies = Vec::new();
    let mut current = j0.clone();
    let mut round = 0usize;

    let outcome = loop {
        if round == max_iter {
            break SolveOutcome::Stalled(current);
        }
        let (tj, mu) = model.apply_t(&current);
        let residual = tj.sup_distance(&current);
        iterates.push(current.clone());
        residuals.push(residual);
        policies.push(mu.clone());
        round += 1;
        if residual <= tol_e {
            break SolveOutcome::Converged(current);
        }
        let m = m_schedule[(round - 1).min(m_schedule.len() - 1)];
        let mut j = current;
        for _ in 0..m {
            j = model.apply_tmu(&mu, &j);
        }
        current = j;
    };

    Ok(SolveTrace {
        iterates,
        residuals,
        policies,
        outcome,
        iterations: round,
    })
}
