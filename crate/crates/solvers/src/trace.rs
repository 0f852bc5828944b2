//! Shared solve trace shared by every iterative method in this crate.
//!
//! A trace records the iterates a method visited, the sup-norm residual
//! measured when the operator was applied to each iterate, and an
//! outcome that says how the run ended. `iterates` and `residuals`
//! always have the same length: `residuals[i]` is the distance between
//! `iterates[i]` and its one-step image. The final value of a run that
//! stopped on a budget is carried by the outcome, not the iterate list,
//! because its own residual was never measured.

use abstract_model::StationaryPolicy;
use extreal_core::{CostFunction, ExtendedReal};
use serde_json::json;

pub const DEFAULT_SOLVE_TOL: f64 = 1e-9;
pub const DEFAULT_MAX_ITER: usize = 100_000;

/// How an iterative run ended.
#[derive(Debug, Clone, PartialEq)]
pub enum SolveOutcome {
    /// Residual dropped to the tolerance after at least one strict move.
    Converged(CostFunction),
    /// No progress: either the start was already a fixed point of the
    /// operator (first residual within tolerance), or the iteration
    /// budget ran out. The two are distinguishable by the final
    /// recorded residual.
    Stalled(CostFunction),
    /// The iterates (or policies, for policy iteration) entered a
    /// cycle. Carries one full period of greedy policies.
    Oscillating(Vec<StationaryPolicy>),
    /// Sustained monotone drift past the blowup bound at the listed
    /// states.
    Diverged(Vec<usize>),
}

impl SolveOutcome {
    fn label(&self) -> &'static str {
        match self {
            SolveOutcome::Converged(_) => "converged",
            SolveOutcome::Stalled(_) => "stalled",
            SolveOutcome::Oscillating(_) => "oscillating",
            SolveOutcome::Diverged(_) => "diverged",
        }
    }
}

#[derive(Debug, Clone)]
pub struct SolveTrace {
    /// Iterates in visit order, starting with the initial function.
    pub iterates: Vec<CostFunction>,
    /// residuals[i] = sup distance between iterates[i] and its image.
    pub residuals: Vec<ExtendedReal>,
    /// For policy-based methods, the policy evaluated at each step.
    /// Value iteration leaves this empty.
    pub policies: Vec<StationaryPolicy>,
    pub outcome: SolveOutcome,
    /// Operator applications (or evaluation rounds) performed.
    pub iterations: usize,
}

impl SolveTrace {
    /// Last function the run settled on, regardless of outcome kind.
    /// `None` for oscillating and diverged runs, which have no single
    /// final value.
    pub fn final_value(&self) -> Option<&CostFunction> {
        match &self.outcome {
            SolveOutcome::Converged(j) | SolveOutcome::Stalled(j) => Some(j),
            _ => None,
        }
    }

    pub fn converged_value(&self) -> Option<&CostFunction> {
        match &self.outcome {
            SolveOutcome::Converged(j) => Some(j),
            _ => None,
        }
    }

    /// One row per iterate: iteration index, state values in id order,
    /// then the residual measured at that iterate.
    pub fn csv(&self) -> String {
        let n = self.iterates.first().map_or(0, |j| j.len());
        let mut out = String::from("iteration");
        for x in 0..n {
            out.push_str(&format!(",j_{x}"));
        }
        out.push_str(",residual\n");
        for (k, j) in self.iterates.iter().enumerate() {
            out.push_str(&k.to_string());
            for x in 0..j.len() {
                out.push_str(&format!(",{}", j[x]));
            }
            out.push_str(&format!(",{}\n", self.residuals[k]));
        }
        out
    }

    /// Compact machine-readable summary: outcome kind, iteration count,
    /// final values when a single limit exists, the policy cycle when
    /// the run oscillated, and the drifting states when it diverged.
    pub fn json_summary(&self) -> String {
        let final_values = self
            .final_value()
            .map(|j| (0..j.len()).map(|x| j[x].to_string()).collect::<Vec<_>>());
        let cycle = match &self.outcome {
            SolveOutcome::Oscillating(policies) => Some(
                policies
                    .iter()
                    .map(|mu| mu.controls().to_vec())
                    .collect::<Vec<_>>(),
            ),
            _ => None,
        };
        let drifting = match &self.outcome {
            SolveOutcome::Diverged(states) => Some(states.clone()),
            _ => None,
        };
        let value = json!({
            "outcome": self.outcome.label(),
            "iterations": self.iterations,
            "final": final_values,
            "policy_cycle": cycle,
            "drifting_states": drifting,
        });
        serde_json::to_string_pretty(&value).expect("summary serialization cannot fail")
    }
}
