//! Convergence-rate and error bounds for value iteration in a weighted
//! sup-norm: one application contracts the distance to the restricted
//! optimum by the modulus, and the one-step decrease bounds the full
//! distance.
//!
//! Everything here lives on the non-stop states. The operator preserves
//! stop coordinates exactly, so the contraction statement can only hold
//! on the slice where they are pinned; distances and sups below
//! therefore skip the stop set.

use abstract_model::FiniteModel;
use extreal_core::{CostFunction, ExtendedReal, WeightedNorm};

use crate::error::SolverError;
use crate::trace::DEFAULT_SOLVE_TOL;

/// Both sides of the two rate inequalities plus the measured modulus.
#[derive(Clone, Copy, Debug)]
pub struct RateCheck {
    /// `(lhs, rhs)` of the contraction step: weighted distance of `TJ`
    /// from the restricted optimum vs `beta` times the distance of `J`.
    pub contraction: (f64, f64),
    /// `(lhs, rhs)` of the error bound: weighted distance of `J` from
    /// the restricted optimum vs the scaled one-step decrease
    /// `sup_x (J(x) - TJ(x)) / v(x) / (1 - beta)`.
    pub error_bound: (f64, f64),
    /// Exact contraction modulus of the greedy-at-optimum policy
    /// operator on the pinned slice: the largest weighted discounted
    /// row sum over non-stop states.
    pub empirical_modulus: f64,
    /// Set when the measured modulus exceeds the supplied `beta`, in
    /// which case `beta` certifies nothing and the inequalities may
    /// fail.
    pub modulus_warning: bool,
}

/// Evaluates both rate inequalities at `j` against the restricted
/// optimum `j_star_s` (computed by the caller, e.g. by the optimum over
/// certified-regular policies or by brute force).
///
/// Preconditions: `beta` in (0, 1), and `j >= j_star_s` at every
/// non-stop state (within the default tolerance). The weights are
/// positive by construction of [`WeightedNorm`].
pub fn vi_rate_check(
    model: &FiniteModel,
    j: &CostFunction,
    j_star_s: &CostFunction,
    v: &WeightedNorm,
    beta: f64,
) -> Result<RateCheck, SolverError> {
    let n = model.n_states();
    assert_eq!(j.len(), n, "cost function length mismatch");
    assert_eq!(j_star_s.len(), n, "optimum length mismatch");
    assert_eq!(v.len(), n, "weight vector length mismatch");
    if !(beta > 0.0 && beta < 1.0) {
        return Err(SolverError::BadModulus { beta });
    }
    let free: Vec<usize> = (0..n).filter(|&x| !model.is_stop(x)).collect();
    let tol = ExtendedReal::new(DEFAULT_SOLVE_TOL);
    for &x in &free {
        let above = j[x] >= j_star_s[x] || j[x].abs_diff(j_star_s[x]) <= tol;
        if !above {
            return Err(SolverError::BelowRestrictedOptimum { state: x });
        }
    }

    let (tj, _) = model.apply_t(j);
    let dist_j = wdist(&free, j, j_star_s, v);
    let contraction = (wdist(&free, &tj, j_star_s, v), beta * dist_j);
    let decrease = free
        .iter()
        .map(|&x| signed_gap(j[x], tj[x]) / v.weights()[x])
        .fold(0.0, f64::max);
    let error_bound = (dist_j, decrease / (1.0 - beta));

    // The greedy policy at the optimum; its operator is affine, so its
    // modulus is exactly the worst weighted discounted row sum over the
    // free block.
    let (_, mu_star) = model.apply_t(j_star_s);
    let mut empirical_modulus = 0.0f64;
    for &x in &free {
        let control = model
            .control(x, mu_star.control(x))
            .expect("greedy policy comes from this model");
        let row: f64 = control
            .transitions
            .iter()
            .filter(|&&(_, y)| !model.is_stop(y))
            .map(|&(p, y)| p * v.weights()[y])
            .sum();
        empirical_modulus = empirical_modulus.max(model.alpha() * row / v.weights()[x]);
    }

    Ok(RateCheck {
        contraction,
        error_bound,
        empirical_modulus,
        modulus_warning: empirical_modulus > beta + 1e-12,
    })
}

fn wdist(free: &[usize], a: &CostFunction, b: &CostFunction, v: &WeightedNorm) -> f64 {
    free.iter()
        .map(|&x| a[x].abs_diff(b[x]).to_f64() / v.weights()[x])
        .fold(0.0, f64::max)
}

/// `a - b` as a plain float, with coincident infinities counting as
/// zero, matching the distance convention.
fn signed_gap(a: ExtendedReal, b: ExtendedReal) -> f64 {
    match (a, b) {
        (ExtendedReal::Finite(x), ExtendedReal::Finite(y)) => x - y,
        _ if a == b => 0.0,
        _ if a > b => f64::INFINITY,
        _ => f64::NEG_INFINITY,
    }
}
