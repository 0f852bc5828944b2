//! The vanishing-perturbation method: add delta to every stage cost off
//! the stop set, solve the perturbed problem, shrink delta down a
//! schedule, and extrapolate the curve to zero.
//!
//! The point of the perturbation is that it makes every policy that
//! lingers off the stop set pay for it, so the perturbed optimum
//! ignores the lingering policies and converges to the optimum over the
//! well-behaved ones as delta vanishes.

use abstract_model::{Control, FiniteModel};
use extreal_core::{CostFunction, ExtendedReal};

use crate::error::SolverError;
use crate::trace::{SolveOutcome, DEFAULT_MAX_ITER};
use crate::vi::value_iteration;

/// Tail curvature below this reads as affine in delta.
const AFFINE_TOL: f64 = 1e-6;

/// Strictly decreasing positive deltas.
#[derive(Clone, Debug)]
pub struct PerturbationSchedule {
    deltas: Vec<f64>,
}

impl PerturbationSchedule {
    pub fn new(deltas: Vec<f64>) -> Result<Self, SolverError> {
        let ok = !deltas.is_empty()
            && deltas.iter().all(|d| d.is_finite() && *d > 0.0)
            && deltas.windows(2).all(|w| w[1] < w[0]);
        if !ok {
            return Err(SolverError::BadSchedule);
        }
        Ok(PerturbationSchedule { deltas })
    }

    pub fn deltas(&self) -> &[f64] {
        &self.deltas
    }
}

impl Default for PerturbationSchedule {
    /// Halving schedule 1, 1/2, 1/4, …, 2⁻²⁰.
    fn default() -> Self {
        PerturbationSchedule {
            deltas: (0..=20).map(|k| 0.5f64.powi(k)).collect(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct PerturbationOutcome {
    /// Estimate of the restricted optimum: the affine extrapolation of
    /// the curve tail to delta = 0 when that tail is affine within
    /// tolerance, otherwise the value at the smallest delta.
    pub estimate: CostFunction,
    /// Solved optimum per delta, in schedule order.
    pub curve: Vec<(f64, CostFunction)>,
    /// Whether the affine extrapolation was used. False also covers
    /// schedules too short to test affineness (fewer than three deltas).
    pub affine_extrapolation: bool,
}

/// Solves the delta-perturbed problem for each schedule entry by value
/// iteration, warm-starting each solve from the previous one (the first
/// from the model's terminal function), and extrapolates the curve.
///
/// The warm start matters: perturbed optima at successive deltas differ
/// by O(delta), so each inner solve after the first settles in a few
/// steps, where a cold start would pay the full horizon every time.
///
/// Each perturbed problem must be solvable by value iteration; an inner
/// run that neither converges nor starts on a fixed point is an error.
pub fn perturbation_solve(
    model: &FiniteModel,
    schedule: &PerturbationSchedule,
    inner_tol: f64,
) -> Result<PerturbationOutcome, SolverError> {
    assert!(
        inner_tol > 0.0 && inner_tol.is_finite(),
        "inner_tol must be positive"
    );
    let mut warm = model.terminal().clone();
    let mut curve = Vec::with_capacity(schedule.deltas().len());
    for &delta in schedule.deltas() {
        let perturbed = perturbed_model(model, delta);
        let trace = value_iteration(&perturbed, &warm, inner_tol, DEFAULT_MAX_ITER);
        let settled = trace
            .residuals
            .last()
            .is_some_and(|r| *r <= ExtendedReal::new(inner_tol));
        let j = match trace.outcome {
            SolveOutcome::Converged(j) => j,
            SolveOutcome::Stalled(j) if settled => j,
            _ => return Err(SolverError::InnerSolveFailed { delta }),
        };
        curve.push((delta, j.clone()));
        warm = j;
    }

    let (estimate, affine_extrapolation) = extrapolate(&curve);
    Ok(PerturbationOutcome {
        estimate,
        curve,
        affine_extrapolation,
    })
}

/// Same states and transitions, stage costs shifted by delta off the
/// stop set. Stop states keep their zero-cost absorbing controls, so
/// the perturbed model is valid by construction.
fn perturbed_model(model: &FiniteModel, delta: f64) -> FiniteModel {
    let controls = (0..model.n_states())
        .map(|x| {
            model
                .controls(x)
                .iter()
                .map(|c| {
                    let cost = if model.is_stop(x) { c.cost } else { c.cost + delta };
                    Control::new(c.id, cost, c.transitions.clone())
                })
                .collect()
        })
        .collect();
    FiniteModel::new(
        controls,
        model.alpha(),
        model.terminal().clone(),
        model.stop_set().iter().copied(),
    )
    .expect("cost shift preserves model validity")
}

/// Fits the last three curve points per state: if the middle one lies
/// on the chord of the outer two (within tolerance), the tail is affine
/// and the chord's value at delta = 0 is the estimate. Infinite
/// coordinates count as affine only when constant across the tail.
fn extrapolate(curve: &[(f64, CostFunction)]) -> (CostFunction, bool) {
    let (_, j_last) = curve.last().expect("schedule is nonempty");
    if curve.len() < 3 {
        return (j_last.clone(), false);
    }
    let (d1, j1) = &curve[curve.len() - 3];
    let (d2, j2) = &curve[curve.len() - 2];
    let (d3, j3) = &curve[curve.len() - 1];
    let mut out = CostFunction::zeros(j_last.len());
    let mut affine = true;
    for x in 0..j_last.len() {
        match (j1[x], j2[x], j3[x]) {
            (ExtendedReal::Finite(a), ExtendedReal::Finite(b), ExtendedReal::Finite(c)) => {
                let slope = (a - c) / (d1 - d3);
                let predicted = c + slope * (d2 - d3);
                if (predicted - b).abs() > AFFINE_TOL {
                    affine = false;
                }
                out.set(x, ExtendedReal::new(c - slope * d3));
            }
            (a, b, c) => {
                if a != c || b != c {
                    affine = false;
                }
                out.set(x, c);
            }
        }
    }
    if affine {
        (out, true)
    } else {
        (j_last.clone(), false)
    }
}
