//! Private exact policy evaluation used by the exact-evaluation mode of
//! policy iteration. Kept internal so the solver suite stays
//! independent of the reference brute-force crate.

use abstract_model::{FiniteModel, StationaryPolicy};
use extreal_core::{CostFunction, ExtendedReal};
use regularity::classify_proper;

use crate::error::SolverError;

/// Pivots below this magnitude are treated as a singular system.
const PIVOT_FLOOR: f64 = 1e-12;

/// The unique solution of `J = g_mu + alpha P_mu J` on the non-stop
/// states, stop coordinates pinned to zero. Only valid when the system
/// characterizes the policy cost: discounted, or proper under total
/// cost. Improper undiscounted policies are rejected rather than solved
/// into garbage.
pub(crate) fn exact_cost(
    model: &FiniteModel,
    mu: &StationaryPolicy,
) -> Result<CostFunction, SolverError> {
    model.validate_policy(mu)?;
    if model.alpha() >= 1.0 && !classify_proper(model, mu)? {
        return Err(SolverError::ImproperPolicyEvaluation {
            policy: mu.to_string(),
        });
    }

    let n = model.n_states();
    let free: Vec<usize> = (0..n).filter(|&x| !model.is_stop(x)).collect();
    let mut col_of = vec![usize::MAX; n];
    for (i, &x) in free.iter().enumerate() {
        col_of[x] = i;
    }

    // Augmented rows [I - alpha P_mu | g_mu] over the free states;
    // transitions into the stop set drop out since stop values are zero.
    let m = free.len();
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(m);
    for &x in &free {
        let control = model
            .control(x, mu.control(x))
            .expect("policy validated against this model");
        let mut row = vec![0.0f64; m + 1];
        row[col_of[x]] += 1.0;
        for &(p, y) in &control.transitions {
            if !model.is_stop(y) {
                row[col_of[y]] -= model.alpha() * p;
            }
        }
        row[m] = control.cost;
        rows.push(row);
    }

    // Gauss-Jordan with partial pivoting: reduce to the identity so the
    // augmented column becomes the solution directly.
    for col in 0..m {
        let best = (col..m)
            .max_by(|&r, &s| rows[r][col].abs().total_cmp(&rows[s][col].abs()))
            .expect("nonempty pivot search");
        if rows[best][col].abs() < PIVOT_FLOOR {
            return Err(SolverError::SingularEvaluation {
                policy: mu.to_string(),
            });
        }
        rows.swap(col, best);
        let pivot = rows[col][col];
        for k in col..=m {
            rows[col][k] /= pivot;
        }
        for row in 0..m {
            if row == col {
                continue;
            }
            let factor = rows[row][col];
            if factor == 0.0 {
                continue;
            }
            for k in col..=m {
                rows[row][k] -= factor * rows[col][k];
            }
        }
    }

    let mut values = CostFunction::zeros(n);
    for (i, &x) in free.iter().enumerate() {
        values.set(x, ExtendedReal::new(rows[i][m]));
    }
    Ok(values)
}
