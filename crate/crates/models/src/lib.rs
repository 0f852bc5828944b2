//! Seeded builders for the benchmark instances the rest of the workspace
//! is exercised on: the two-state exit-or-loop counterexample, line-grid
//! stopping problems, and random stochastic shortest-path, nonnegative,
//! and discounted MDPs.
//!
//! Randomized builders draw every sample from a single documented PRNG,
//! `ChaCha8Rng` seeded with the caller's `u64`, so a seed fully
//! determines an instance bit-for-bit on every platform.

use abstract_model::{Control, FiniteModel, StationaryPolicy};
use extreal_core::CostFunction;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BuildError {
    #[error("need at least {need} states, got {got}")]
    TooFewStates { need: usize, got: usize },

    #[error("need at least one control per state")]
    NoControls,

    #[error("cost range [{lo}, {hi}] is empty or not finite")]
    InvalidCostRange { lo: f64, hi: f64 },

    #[error("proper bias {0} is outside [0, 1]")]
    InvalidProperBias(f64),

    #[error("discount factor {0} is outside (0, 1)")]
    InvalidDiscount(f64),

    #[error("grid cost vector has length {got}, expected {expected}")]
    GridCostLength { got: usize, expected: usize },
}

/// Parameters of the two-state exit-or-loop model: staying in place
/// costs `a` per stage, moving to the terminal state costs `b` once.
/// Every real pair is meaningful; the interesting regimes are decided by
/// the signs of `a` and `b`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DetSpParams {
    pub a: f64,
    pub b: f64,
}

/// State index of the working state in [`build_detsp`] output.
pub const DETSP_WORK: usize = 0;
/// State index of the cost-free terminal state.
pub const DETSP_TERMINAL: usize = 1;
/// Control id at the working state that loops in place (cost `a`).
/// The loop has the lower id, so exact greedy ties resolve to it.
pub const DETSP_LOOP: usize = 0;
/// Control id at the working state that exits to the terminal (cost `b`).
pub const DETSP_EXIT: usize = 1;

/// The two-state deterministic shortest-path example: one working state
/// with a self-loop of cost `a` and an exit to the terminal of cost `b`,
/// undiscounted, zero terminal function.
///
/// Its Bellman operator at the working state is `J ↦ min(b, a + J)`,
/// which makes it the smallest model exhibiting every fixed-point and
/// policy-iteration pathology this workspace tests for.
pub fn build_detsp(params: DetSpParams) -> FiniteModel {
    FiniteModel::new(
        vec![
            vec![
                Control::new(DETSP_LOOP, params.a, vec![(1.0, DETSP_WORK)]),
                Control::new(DETSP_EXIT, params.b, vec![(1.0, DETSP_TERMINAL)]),
            ],
            vec![Control::new(0, 0.0, vec![(1.0, DETSP_TERMINAL)])],
        ],
        1.0,
        CostFunction::zeros(2),
        [DETSP_TERMINAL],
    )
    .expect("two-state model is always well formed")
}

/// The stationary policy that exits immediately (cost `b`).
pub fn detsp_exit_policy() -> StationaryPolicy {
    StationaryPolicy::new_unchecked(vec![DETSP_EXIT, 0])
}

/// The stationary policy that loops forever (cost `a` per stage).
pub fn detsp_loop_policy() -> StationaryPolicy {
    StationaryPolicy::new_unchecked(vec![DETSP_LOOP, 0])
}

/// Grid move control ids, shared by every cell except the stop cell.
pub const GRID_LEFT: usize = 0;
pub const GRID_RIGHT: usize = 1;
pub const GRID_STAY: usize = 2;

/// Parameters of the deterministic line-grid stopping problem: cells
/// `0..n`, moves {left, right, stay} with per-cell costs, cell 0
/// cost-free and absorbing. Right from the last cell clamps in place.
#[derive(Clone, Debug, PartialEq)]
pub struct GridControlParams {
    pub n: usize,
    /// Cost of moving left from cell `i` (entry 0 is unused).
    pub left_costs: Vec<f64>,
    /// Cost of moving right from cell `i` (entry 0 is unused).
    pub right_costs: Vec<f64>,
    /// Cost of staying at cell `i` (entry 0 is unused).
    pub stay_costs: Vec<f64>,
}

impl GridControlParams {
    /// Same move costs at every cell.
    pub fn uniform(n: usize, left: f64, right: f64, stay: f64) -> Self {
        GridControlParams {
            n,
            left_costs: vec![left; n],
            right_costs: vec![right; n],
            stay_costs: vec![stay; n],
        }
    }

    /// Every move costs 1: optimal costs are the plain walking distances
    /// to cell 0.
    pub fn unit_moves(n: usize) -> Self {
        Self::uniform(n, 1.0, 1.0, 1.0)
    }

    /// Free interior movement with a single payoff on the edge into the
    /// stop cell (negative `reward` = being paid to finish).
    pub fn terminal_reward(n: usize, reward: f64) -> Self {
        let mut params = Self::uniform(n, 0.0, 0.0, 0.0);
        params.left_costs[1] = reward;
        params
    }
}

/// Builds the deterministic line-grid stopping model described by
/// `params`: a line of `n ≥ 2` cells where cell 0 is the cost-free
/// absorbing stop cell and every other cell offers left / right / stay.
pub fn build_grid_control(params: &GridControlParams) -> Result<FiniteModel, BuildError> {
    let n = params.n;
    if n < 2 {
        return Err(BuildError::TooFewStates { need: 2, got: n });
    }
    for costs in [&params.left_costs, &params.right_costs, &params.stay_costs] {
        if costs.len() != n {
            return Err(BuildError::GridCostLength {
                got: costs.len(),
                expected: n,
            });
        }
    }

    let mut controls = Vec::with_capacity(n);
    controls.push(vec![Control::new(0, 0.0, vec![(1.0, 0)])]);
    for i in 1..n {
        let right_target = (i + 1).min(n - 1);
        controls.push(vec![
            Control::new(GRID_LEFT, params.left_costs[i], vec![(1.0, i - 1)]),
            Control::new(GRID_RIGHT, params.right_costs[i], vec![(1.0, right_target)]),
            Control::new(GRID_STAY, params.stay_costs[i], vec![(1.0, i)]),
        ]);
    }
    Ok(FiniteModel::new(controls, 1.0, CostFunction::zeros(n), [0])
        .expect("grid construction satisfies the model invariants"))
}

/// The policy that walks left from every cell.
pub fn grid_always_left(n: usize) -> StationaryPolicy {
    let mut choice = vec![GRID_LEFT; n];
    choice[0] = 0;
    StationaryPolicy::new_unchecked(choice)
}

/// A seeded random stochastic shortest-path model.
///
/// State 0 is the terminal (cost-free, absorbing); states `1..n_states`
/// each offer `n_controls` controls with ids `0..n_controls`. Per
/// control, a support of at most three successor states is drawn, given
/// random positive weights, and then blended with the terminal state:
/// the final distribution places at least `proper_bias` mass on state 0.
///
/// Consequences of the blend: with `proper_bias = 1` every transition
/// jumps straight to the terminal, and with any `proper_bias > 0` every
/// control retains terminal mass, so every policy is proper (in
/// particular at least one proper policy always exists). With
/// `proper_bias = 0` supports may avoid the terminal entirely and
/// improper policies become possible.
///
/// Stage costs are sampled uniformly from `cost_range`. The same seed
/// always yields the bit-identical model.
pub fn build_random_ssp(
    n_states: usize,
    n_controls: usize,
    cost_range: (f64, f64),
    proper_bias: f64,
    seed: u64,
) -> Result<FiniteModel, BuildError> {
    if n_states < 2 {
        return Err(BuildError::TooFewStates {
            need: 2,
            got: n_states,
        });
    }
    if n_controls == 0 {
        return Err(BuildError::NoControls);
    }
    let (lo, hi) = cost_range;
    if !(lo <= hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(BuildError::InvalidCostRange { lo, hi });
    }
    if !(0.0..=1.0).contains(&proper_bias) {
        return Err(BuildError::InvalidProperBias(proper_bias));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut controls = Vec::with_capacity(n_states);
    controls.push(vec![Control::new(0, 0.0, vec![(1.0, 0)])]);
    for _ in 1..n_states {
        let mut at_state = Vec::with_capacity(n_controls);
        for u in 0..n_controls {
            let cost = sample_cost(&mut rng, lo, hi);
            let support_size = rng.gen_range(1..=3.min(n_states));
            let support = rand::seq::index::sample(&mut rng, n_states, support_size);
            let weights: Vec<f64> = (0..support_size).map(|_| rng.gen_range(0.1..1.0)).collect();
            let total: f64 = weights.iter().sum();

            let mut probs = vec![0.0; n_states];
            for (k, y) in support.iter().enumerate() {
                probs[y] += (1.0 - proper_bias) * weights[k] / total;
            }
            probs[0] += proper_bias;
            let transitions: Vec<(f64, usize)> = probs
                .into_iter()
                .enumerate()
                .filter(|&(_, p)| p > 0.0)
                .map(|(y, p)| (p, y))
                .collect();
            at_state.push(Control::new(u, cost, transitions));
        }
        controls.push(at_state);
    }

    Ok(
        FiniteModel::new(controls, 1.0, CostFunction::zeros(n_states), [0])
            .expect("sampled distributions are normalized"),
    )
}

fn sample_cost(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    if lo == hi {
        lo
    } else {
        rng.gen_range(lo..hi)
    }
}

/// A seeded nonnegative-cost MDP with finite optimal costs.
///
/// Wraps [`build_random_ssp`] with stage costs in `[0, 1]` and terminal
/// blend 0.3, so every policy is proper and optimal costs are finite
/// while stage costs stay nonnegative.
pub fn build_nonneg_mdp(
    n_states: usize,
    n_controls: usize,
    seed: u64,
) -> Result<FiniteModel, BuildError> {
    build_random_ssp(n_states, n_controls, (0.0, 1.0), 0.3, seed)
}

/// A seeded discounted MDP: dense-ish random transitions, stage costs in
/// `[0, 1]`, discount `alpha ∈ (0, 1)`, no stop set. Its Bellman
/// operator is an `alpha`-contraction in the sup-norm.
pub fn build_discounted(
    n_states: usize,
    n_controls: usize,
    alpha: f64,
    seed: u64,
) -> Result<FiniteModel, BuildError> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(BuildError::InvalidDiscount(alpha));
    }
    if n_states < 1 {
        return Err(BuildError::TooFewStates {
            need: 1,
            got: n_states,
        });
    }
    if n_controls == 0 {
        return Err(BuildError::NoControls);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut controls = Vec::with_capacity(n_states);
    for _ in 0..n_states {
        let mut at_state = Vec::with_capacity(n_controls);
        for u in 0..n_controls {
            let cost = rng.gen_range(0.0..1.0);
            let support_size = rng.gen_range(1..=3.min(n_states));
            let support = rand::seq::index::sample(&mut rng, n_states, support_size);
            let weights: Vec<f64> = (0..support_size).map(|_| rng.gen_range(0.1..1.0)).collect();
            let total: f64 = weights.iter().sum();
            let transitions: Vec<(f64, usize)> = support
                .iter()
                .enumerate()
                .map(|(k, y)| (weights[k] / total, y))
                .collect();
            at_state.push(Control::new(u, cost, transitions));
        }
        controls.push(at_state);
    }

    Ok(
        FiniteModel::new(controls, alpha, CostFunction::zeros(n_states), [])
            .expect("sampled distributions are normalized"),
    )
}
