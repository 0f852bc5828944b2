//! Exhaustive fixed-point location on small models.

use abstract_model::FiniteModel;
use extreal_core::{CostFunction, ExtendedReal};

use crate::error::RegularityError;

/// Combinatorial guard: the product of per-state grid sizes may not
/// exceed this.
pub const GRID_PRODUCT_LIMIT: u128 = 10_000_000;

/// Inclusive arithmetic grid `lo, lo+step, …` up to `hi` (with a hair
/// of slack so accumulated rounding cannot drop the endpoint).
pub fn uniform_grid(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    assert!(step > 0.0, "step must be positive");
    assert!(lo <= hi, "empty range");
    let count = ((hi - lo) / step + 1e-9).floor() as usize;
    (0..=count).map(|i| lo + step * i as f64).collect()
}

/// Every grid point `J` (one value grid per state, Cartesian product)
/// with `‖TJ − J‖_sup ≤ tol`. Intended for one- to three-state models
/// where the fixed-point set of the Bellman operator can be drawn by
/// hand; the product guard keeps accidental large scans from running
/// away.
pub fn fixed_point_scan(
    model: &FiniteModel,
    grids: &[Vec<f64>],
    tol: f64,
) -> Result<Vec<CostFunction>, RegularityError> {
    let n = model.n_states();
    if grids.len() != n {
        return Err(RegularityError::GridArityMismatch {
            expected: n,
            got: grids.len(),
        });
    }
    let mut product: u128 = 1;
    for (state, grid) in grids.iter().enumerate() {
        if grid.is_empty() {
            return Err(RegularityError::EmptyGrid { state });
        }
        product = product.saturating_mul(grid.len() as u128);
    }
    if product > GRID_PRODUCT_LIMIT {
        return Err(RegularityError::GridTooLarge {
            product,
            limit: GRID_PRODUCT_LIMIT,
        });
    }

    let tol = ExtendedReal::new(tol);
    let mut fixed = Vec::new();
    let mut index = vec![0usize; n];
    loop {
        let j: CostFunction = index
            .iter()
            .enumerate()
            .map(|(x, &i)| ExtendedReal::new(grids[x][i]))
            .collect();
        let (tj, _) = model.apply_t(&j);
        if tj.sup_distance(&j) <= tol {
            fixed.push(j);
        }

        // Odometer increment; done when the highest digit wraps.
        let mut digit = 0;
        loop {
            if digit == n {
                return Ok(fixed);
            }
            index[digit] += 1;
            if index[digit] < grids[digit].len() {
                break;
            }
            index[digit] = 0;
            digit += 1;
        }
    }
}
