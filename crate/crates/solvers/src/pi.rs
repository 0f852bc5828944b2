//! Policy iteration: alternate exact or capped-iterative evaluation
//! with greedy improvement under a pluggable tie-break rule, detecting
//! convergence, policy cycles, and budget exhaustion.

use std::collections::HashMap;

use abstract_model::{
    EventuallyStationaryPolicy, FiniteModel, PolicyCostOptions, StationaryPolicy,
};
use extreal_core::CostFunction;

use crate::error::SolverError;
use crate::linear_eval::exact_cost;
use crate::trace::{SolveOutcome, SolveTrace, DEFAULT_SOLVE_TOL};

/// Total selection among the minimizing controls of an improvement
/// step. Ties are real: distinct controls can attain the same one-step
/// value, and which one the rule picks decides whether the iteration
/// stalls, switches, or cycles.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum TieBreakRule {
    /// Keep the incumbent control whenever it is among the minimizers.
    /// The default: it never switches without strict improvement, which
    /// also means it can stop at a non-optimal fixed point of the
    /// evaluation/improvement pair.
    #[default]
    KeepCurrentIfTied,
    /// Deterministically pick the smallest minimizing control id.
    LowestControlId,
    /// Move off the incumbent whenever any other minimizer exists.
    AlwaysSwitchIfTied,
}

/// How the cost of each policy is computed between improvements.
#[derive(Clone, Debug)]
pub enum PolicyEvalMode {
    /// Solve the linear evaluation system exactly. Undiscounted
    /// improper policies are an error: their cost is not characterized
    /// by the system, and evaluation must be able to produce infinite
    /// values to proceed.
    ExactLinearSolve,
    /// Certified fixed-point iteration with a horizon cap; improper
    /// policies come back with `±∞` where drift is certified, and the
    /// improvement step handles the infinities in extended arithmetic.
    IterativeWithCap(PolicyCostOptions),
}

impl Default for PolicyEvalMode {
    fn default() -> Self {
        PolicyEvalMode::IterativeWithCap(PolicyCostOptions::default())
    }
}

/// Runs policy iteration from `mu0`.
///
/// Each round records the evaluated cost, the policy, and the Bellman
/// residual of the evaluated cost. Termination:
///
/// * `Converged(J_mu)` when improvement returns the incumbent policy.
///   The final residual is then at most the tie tolerance (plus any
///   iterative-evaluation error), because the incumbent attaining the
///   minimum everywhere is exactly the fixed-point property.
/// * `Oscillating(cycle)` when improvement produces a policy seen
///   before with a different successor, i.e. the policy sequence
///   entered a cycle of period >= 2. The cycle is returned in visit
///   order.
/// * `Stalled(last J)` when `max_iter` evaluations run out.
///
/// `iterations` counts policy evaluations performed.
pub fn policy_iteration(
    model: &FiniteModel,
    mu0: &StationaryPolicy,
    rule: TieBreakRule,
    eval: &PolicyEvalMode,
    max_iter: usize,
) -> Result<SolveTrace, SolverError> {
    model.validate_policy(mu0)?;
    let tie_tol = DEFAULT_SOLVE_TOL;
    let mut iterates: Vec<CostFunction> = Vec::new();
    let mut residuals = Vec::new();
    let mut policies: Vec<StationaryPolicy> = Vec::new();
    let mut seen: HashMap<StationaryPolicy, usize> = HashMap::new();
    let mut mu = mu0.clone();

    let outcome = loop {
        if policies.len() == max_iter {
            let last = iterates
                .last()
                .cloned()
                .unwrap_or_else(|| model.terminal().clone());
            break SolveOutcome::Stalled(last);
        }
        let j = evaluate(model, &mu, eval)?;
        let (tj, _) = model.apply_t(&j);
        seen.insert(mu.clone(), policies.len());
        policies.push(mu.clone());
        residuals.push(tj.sup_distance(&j));
        iterates.push(j.clone());

        let next = improve(model, &mu, &j, rule, tie_tol);
        if next == mu {
            break SolveOutcome::Converged(j);
        }
        if let Some(&first) = seen.get(&next) {
            break SolveOutcome::Oscillating(policies[first..].to_vec());
        }
        mu = next;
    };

    let iterations = policies.len();
    Ok(SolveTrace {
        iterates,
        residuals,
        policies,
        outcome,
        iterations,
    })
}

fn evaluate(
    model: &FiniteModel,
    mu: &StationaryPolicy,
    eval: &PolicyEvalMode,
) -> Result<CostFunction, SolverError> {
    match eval {
        PolicyEvalMode::ExactLinearSolve => exact_cost(model, mu),
        PolicyEvalMode::IterativeWithCap(options) => {
            let pi = EventuallyStationaryPolicy::stationary(mu.clone());
            Ok(abstract_model::policy_cost(model, &pi, options).cost)
        }
    }
}

/// One greedy improvement step: per state, restrict to the controls
/// minimizing the one-step value at `j` (within the tie tolerance) and
/// let the rule pick among them.
fn improve(
    model: &FiniteModel,
    mu: &StationaryPolicy,
    j: &CostFunction,
    rule: TieBreakRule,
    tie_tol: f64,
) -> StationaryPolicy {
    let n = model.n_states();
    let mut choice = Vec::with_capacity(n);
    for x in 0..n {
        let (_, ids) = model.min_controls(x, j, tie_tol);
        let incumbent = mu.control(x);
        let picked = match rule {
            TieBreakRule::LowestControlId => ids[0],
            TieBreakRule::KeepCurrentIfTied => {
                if ids.contains(&incumbent) {
                    incumbent
                } else {
                    ids[0]
                }
            }
            TieBreakRule::AlwaysSwitchIfTied => ids
                .iter()
                .copied()
                .find(|&id| id != incumbent)
                .unwrap_or(incumbent),
        };
        choice.push(picked);
    }
    StationaryPolicy::new_unchecked(choice)
}
