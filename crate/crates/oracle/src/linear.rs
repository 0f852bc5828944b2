//! Exact policy evaluation by direct linear solve.

use abstract_model::{FiniteModel, StationaryPolicy};
use extreal_core::{CostFunction, ExtendedReal};
use regularity::classify_proper;

use crate::error::OracleError;

/// Pivots below this are treated as a singular system.
pub const SINGULAR_PIVOT: f64 = 1e-12;

/// The policy's cost as the solution of its linear fixed-point system
/// on the non-stop states, with stop states pinned to zero.
///
/// Requires the system to characterize the cost: either discounting
/// (`alpha < 1`) or a proper policy under total cost. Improper
/// undiscounted policies are rejected up front, and a singular system
/// past that check is still reported as impropriety evidence rather
/// than solved into garbage.
pub fn exact_policy_cost(
    model: &FiniteModel,
    mu: &StationaryPolicy,
) -> Result<CostFunction, OracleError> {
    model.validate_policy(mu)?;
    if model.alpha() >= 1.0 && !classify_proper(model, mu)? {
        return Err(OracleError::ImproperPolicy {
            policy: mu.to_string(),
        });
    }

    let n = model.n_states();
    let free: Vec<usize> = (0..n).filter(|&x| !model.is_stop(x)).collect();
    let mut col_of = vec![usize::MAX; n];
    for (i, &x) in free.iter().enumerate() {
        col_of[x] = i;
    }

    // (identity - alpha P_mu) J = g_mu, restricted to the free states;
    // transitions into the stop set contribute nothing to the
    // right-hand side because stop values are zero.
    let m = free.len();
    let mut a = vec![vec![0.0f64; m]; m];
    let mut b = vec![0.0f64; m];
    for (i, &x) in free.iter().enumerate() {
        let control = model
            .control(x, mu.control(x))
            .expect("policy validated against this model");
        a[i][i] += 1.0;
        for &(p, y) in &control.transitions {
            if !model.is_stop(y) {
                a[i][col_of[y]] -= model.alpha() * p;
            }
        }
        b[i] = control.cost;
    }

    solve_in_place(&mut a, &mut b).map_err(|floor| OracleError::SingularSystem {
        policy: mu.to_string(),
        floor,
    })?;

    let mut values = CostFunction::zeros(n);
    for (i, &x) in free.iter().enumerate() {
        values.set(x, ExtendedReal::new(b[i]));
    }
    Ok(values)
}

/// Gaussian elimination with partial pivoting; `b` becomes the
/// solution. Errors with the pivot floor when the matrix is singular.
fn solve_in_place(a: &mut [Vec<f64>], b: &mut [f64]) -> Result<(), f64> {
    let m = b.len();
    for col in 0..m {
        let pivot_row = (col..m)
            .max_by(|&r, &s| a[r][col].abs().total_cmp(&a[s][col].abs()))
            .expect("nonempty pivot search");
        if a[pivot_row][col].abs() < SINGULAR_PIVOT {
            return Err(SINGULAR_PIVOT);
        }
        a.swap(col, pivot_row);
        b.swap(col, pivot_row);

        for row in col + 1..m {
            let factor = a[row][col] / a[col][col];
            if factor == 0.0 {
                continue;
            }
            for k in col..m {
                a[row][k] -= factor * a[col][k];
            }
            b[row] -= factor * b[col];
        }
    }
    for col in (0..m).rev() {
        let mut value = b[col];
        for k in col + 1..m {
            value -= a[col][k] * b[k];
        }
        b[col] = value / a[col][col];
    }
    Ok(())
}
