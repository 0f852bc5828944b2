//! The linear-programming method: maximize a positively weighted sum of
//! state values over the functions dominated by their own one-step
//! image, inside a user-supplied box.
//!
//! Feasible functions satisfy `J(x) <= H(x, u, J)` for every control,
//! so they all lie below the restricted optimum and the maximum attains
//! it. The box exists because degenerate instances (zero-cost cycles)
//! leave the feasible set unbounded along some rays; box activity in
//! the solution is the audit trail for that.
//!
//! Stop states are not variables: their value is pinned to zero, the
//! only value consistent with their cost-free absorbing controls.

use abstract_model::FiniteModel;
use extreal_core::{CostFunction, ExtendedReal};

use crate::error::SolverError;

const EPS: f64 = 1e-9;

/// Which edge of the box a state's value landed on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundSide {
    Lower,
    Upper,
}

#[derive(Clone, Debug)]
pub struct LpSolution {
    /// The maximizer, stop states at zero.
    pub values: CostFunction,
    /// Weighted objective value over the non-stop states.
    pub objective: f64,
    /// States whose value sits on a box edge (within 1e-7). A nonempty
    /// list means the box was load-bearing and the result deserves a
    /// second look.
    pub active_bounds: Vec<(usize, BoundSide)>,
}

/// Maximizes `sum beta(x) J(x)` over `{J : J(x) <= H(x, u, J)}`
/// intersected with the box `bounds` at every non-stop state.
///
/// `beta` must be positive and finite at every non-stop state (stop
/// entries are ignored); the box must be finite with `lo < hi`.
pub fn lp_solve(
    model: &FiniteModel,
    beta: &[f64],
    bounds: (f64, f64),
) -> Result<LpSolution, SolverError> {
    let n = model.n_states();
    assert_eq!(beta.len(), n, "weight vector length mismatch");
    let (lo, hi) = bounds;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(SolverError::BadBounds);
    }
    let free: Vec<usize> = (0..n).filter(|&x| !model.is_stop(x)).collect();
    for &x in &free {
        if !(beta[x] > 0.0 && beta[x].is_finite()) {
            return Err(SolverError::BadWeights { state: x });
        }
    }

    let nf = free.len();
    if nf == 0 {
        return Ok(LpSolution {
            values: CostFunction::zeros(n),
            objective: 0.0,
            active_bounds: Vec::new(),
        });
    }
    let mut col_of = vec![usize::MAX; n];
    for (i, &x) in free.iter().enumerate() {
        col_of[x] = i;
    }

    // Shift to y = J - lo >= 0. One row per (state, control):
    //   y_i - alpha sum_j p_j y_j <= g - lo (1 - alpha sum_j p_j)
    // with sums over free successor states only, plus box rows
    // y_i <= hi - lo.
    let alpha = model.alpha();
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut rhs: Vec<f64> = Vec::new();
    for (i, &x) in free.iter().enumerate() {
        for control in model.controls(x) {
            let mut row = vec![0.0f64; nf];
            row[i] += 1.0;
            let mut free_mass = 0.0;
            for &(p, y) in &control.transitions {
                if !model.is_stop(y) {
                    row[col_of[y]] -= alpha * p;
                    free_mass += p;
                }
            }
            rows.push(row);
            rhs.push(control.cost - lo * (1.0 - alpha * free_mass));
        }
    }
    for i in 0..nf {
        let mut row = vec![0.0f64; nf];
        row[i] = 1.0;
        rows.push(row);
        rhs.push(hi - lo);
    }
    let objective: Vec<f64> = free.iter().map(|&x| beta[x]).collect();

    let y = simplex_max(&rows, &rhs, &objective)?;

    let mut values = CostFunction::zeros(n);
    let mut weighted = 0.0;
    let mut active_bounds = Vec::new();
    for (i, &x) in free.iter().enumerate() {
        let j = lo + y[i];
        values.set(x, ExtendedReal::new(j));
        weighted += beta[x] * j;
        if (j - lo).abs() <= 1e-7 {
            active_bounds.push((x, BoundSide::Lower));
        } else if (j - hi).abs() <= 1e-7 {
            active_bounds.push((x, BoundSide::Upper));
        }
    }
    Ok(LpSolution {
        values,
        objective: weighted,
        active_bounds,
    })
}

/// Dense two-phase tableau simplex: maximize `c . y` subject to
/// `A y <= b`, `y >= 0`, where `b` may have negative entries. Bland's
/// rule throughout, so cycling cannot occur. Sizes here are tiny (tens
/// of rows), so no sparsity or factorization games.
fn simplex_max(a: &[Vec<f64>], b: &[f64], c: &[f64]) -> Result<Vec<f64>, SolverError> {
    let m = a.len();
    let nf = c.len();
    let n_slack = m;
    // Column layout: structural, slack, artificial, rhs.
    let mut artificial_of_row = vec![usize::MAX; m];
    let mut n_art = 0;
    for i in 0..m {
        if b[i] < 0.0 {
            artificial_of_row[i] = n_art;
            n_art += 1;
        }
    }
    let total = nf + n_slack + n_art;
    let mut t = vec![vec![0.0f64; total + 1]; m];
    let mut basis = vec![0usize; m];
    for i in 0..m {
        let flip = if b[i] < 0.0 { -1.0 } else { 1.0 };
        for j in 0..nf {
            t[i][j] = flip * a[i][j];
        }
        t[i][nf + i] = flip;
        t[i][total] = flip * b[i];
        if artificial_of_row[i] == usize::MAX {
            basis[i] = nf + i;
        } else {
            let col = nf + n_slack + artificial_of_row[i];
            t[i][col] = 1.0;
            basis[i] = col;
        }
    }

    if n_art > 0 {
        // Phase 1: maximize minus the artificial sum, i.e. drive the
        // artificial basis to zero.
        let mut cost1 = vec![0.0f64; total];
        for j in nf + n_slack..total {
            cost1[j] = -1.0;
        }
        let value = run_simplex(&mut t, &mut basis, &cost1)?;
        if value < -1e-7 {
            return Err(SolverError::Infeasible);
        }
        // Pivot lingering zero-level artificials out of the basis;
        // rows with no other nonzero coefficient are redundant and
        // harmless, their artificial stays at level zero.
        for i in 0..m {
            if basis[i] >= nf + n_slack {
                if let Some(j) = (0..nf + n_slack).find(|&j| t[i][j].abs() > EPS) {
                    pivot(&mut t, &mut basis, i, j);
                }
            }
        }
        for row in t.iter_mut() {
            for j in nf + n_slack..total {
                row[j] = 0.0;
            }
        }
    }

    let mut cost2 = vec![0.0f64; total];
    cost2[..nf].copy_from_slice(c);
    run_simplex(&mut t, &mut basis, &cost2)?;

    let mut y = vec![0.0f64; nf];
    for i in 0..m {
        if basis[i] < nf {
            y[basis[i]] = t[i][total];
        }
    }
    Ok(y)
}

/// Simplex sweep on an existing basic feasible tableau; returns the
/// objective value at the optimum.
fn run_simplex(
    t: &mut [Vec<f64>],
    basis: &mut [usize],
    cost: &[f64],
) -> Result<f64, SolverError> {
    let m = t.len();
    let total = cost.len();
    loop {
        // Reduced costs z_j - c_j from the current basis.
        let mut entering = None;
        for j in 0..total {
            if basis.contains(&j) {
                continue;
            }
            let z: f64 = (0..m).map(|i| cost[basis[i]] * t[i][j]).sum();
            if z - cost[j] < -EPS {
                entering = Some(j);
                break; // Bland: lowest eligible index.
            }
        }
        let Some(j) = entering else {
            let value = (0..m).map(|i| cost[basis[i]] * t[i][total]).sum();
            return Ok(value);
        };
        let mut leaving: Option<(usize, f64)> = None;
        for i in 0..m {
            if t[i][j] > EPS {
                // Clamp tiny negative levels from roundoff so a
                // degenerate basis cannot offer a negative ratio.
                let ratio = (t[i][total] / t[i][j]).max(0.0);
                let better = match leaving {
                    None => true,
                    // Bland again: break ratio ties on the smaller
                    // basis index.
                    Some((r, best)) => {
                        ratio < best - EPS || (ratio < best + EPS && basis[i] < basis[r])
                    }
                };
                if better {
                    leaving = Some((i, ratio));
                }
            }
        }
        let Some((i, _)) = leaving else {
            return Err(SolverError::Unbounded);
        };
        pivot(t, basis, i, j);
    }
}

fn pivot(t: &mut [Vec<f64>], basis: &mut [usize], row: usize, col: usize) {
    let width = t[row].len();
    let p = t[row][col];
    for k in 0..width {
        t[row][k] /= p;
    }
    for i in 0..t.len() {
        if i == row {
            continue;
        }
        let factor = t[i][col];
        if factor == 0.0 {
            continue;
        }
        for k in 0..width {
            t[i][k] -= factor * t[row][k];
        }
    }
    basis[row] = col;
}
