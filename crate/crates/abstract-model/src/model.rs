use std::collections::BTreeSet;

use extreal_core::{CostFunction, ExtendedReal};

use crate::error::ModelError;
use crate::policy::StationaryPolicy;

/// Tolerance on the sum of transition probabilities per (state, control).
pub const PROBABILITY_TOL: f64 = 1e-12;

/// One feasible control at a state: its id, expected stage cost, and
/// finite transition distribution.
#[derive(Clone, Debug, PartialEq)]
pub struct Control {
    pub id: usize,
    pub cost: f64,
    /// `(probability, next_state)` pairs; probabilities sum to 1.
    pub transitions: Vec<(f64, usize)>,
}

impl Control {
    pub fn new(id: usize, cost: f64, transitions: Vec<(f64, usize)>) -> Self {
        Control {
            id,
            cost,
            transitions,
        }
    }

    /// Builds a control from per-successor stage costs, folding the
    /// expectation `g(x,u) = Σ p · g(x,u,y)` at load time.
    pub fn from_transition_costs(id: usize, transitions: Vec<(f64, usize, f64)>) -> Self {
        let cost = transitions.iter().map(|&(p, _, c)| p * c).sum();
        Control {
            id,
            cost,
            transitions: transitions.into_iter().map(|(p, y, _)| (p, y)).collect(),
        }
    }
}

/// A finite total-cost dynamic-programming model.
///
/// Holds the data of the mapping `H(x,u,J) = g(x,u) + α Σ p(y|x,u) J(y)`:
/// per-state nonempty control sets, transition distributions, expected
/// stage costs, a discount `α ∈ (0, 1]`, the terminal function `J̄`
/// anchoring finite-horizon costs, and an optional stopping set of
/// cost-free absorbing states.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteModel {
    controls: Vec<Vec<Control>>,
    alpha: f64,
    terminal: CostFunction,
    stop_set: BTreeSet<usize>,
}

impl FiniteModel {
    /// Validates and builds a model.
    ///
    /// `controls[x]` lists the feasible controls at state `x`; they are
    /// kept sorted by id, which fixes the deterministic greedy tie-break
    /// (lowest id wins). Validation enforces: nonempty control sets,
    /// unique control ids per state, probabilities nonnegative and
    /// summing to 1 within [`PROBABILITY_TOL`], next states in range,
    /// `α ∈ (0, 1]`, terminal length, and that every stop state is
    /// cost-free and absorbing within the stop set.
    pub fn new(
        controls: Vec<Vec<Control>>,
        alpha: f64,
        terminal: CostFunction,
        stop_set: impl IntoIterator<Item = usize>,
    ) -> Result<Self, ModelError> {
        let n_states = controls.len();
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(ModelError::BadDiscount { alpha });
        }
        if terminal.len() != n_states {
            return Err(ModelError::TerminalLengthMismatch {
                got: terminal.len(),
                expected: n_states,
            });
        }
        let stop_set: BTreeSet<usize> = stop_set.into_iter().collect();
        if let Some(&state) = stop_set.iter().find(|&&s| s >= n_states) {
            return Err(ModelError::BadStopState { state, n_states });
        }

        let mut controls = controls;
        for (x, ctrls) in controls.iter_mut().enumerate() {
            if ctrls.is_empty() {
                return Err(ModelError::EmptyControlSet { state: x });
            }
            ctrls.sort_by_key(|c| c.id);
            for pair in ctrls.windows(2) {
                if pair[0].id == pair[1].id {
                    return Err(ModelError::DuplicateControlId {
                        state: x,
                        control: pair[0].id,
                    });
                }
            }
            for c in ctrls.iter() {
                let mut sum = 0.0;
                for &(p, next) in &c.transitions {
                    if next >= n_states {
                        return Err(ModelError::BadNextState {
                            state: x,
                            control: c.id,
                            next,
                            n_states,
                        });
                    }
                    if !(p >= 0.0) {
                        return Err(ModelError::BadProbabilities {
                            state: x,
                            control: c.id,
                            sum: p,
                        });
                    }
                    sum += p;
                }
                if (sum - 1.0).abs() > PROBABILITY_TOL {
                    return Err(ModelError::BadProbabilities {
                        state: x,
                        control: c.id,
                        sum,
                    });
                }
                if stop_set.contains(&x) {
                    let absorbing = c
                        .transitions
                        .iter()
                        .all(|&(p, next)| p == 0.0 || stop_set.contains(&next));
                    if c.cost != 0.0 || !absorbing {
                        return Err(ModelError::StopSetNotAbsorbing {
                            state: x,
                            control: c.id,
                        });
                    }
                }
            }
        }

        Ok(FiniteModel {
            controls,
            alpha,
            terminal,
            stop_set,
        })
    }

    pub fn n_states(&self) -> usize {
        self.controls.len()
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn terminal(&self) -> &CostFunction {
        &self.terminal
    }

    pub fn stop_set(&self) -> &BTreeSet<usize> {
        &self.stop_set
    }

    pub fn is_stop(&self, state: usize) -> bool {
        self.stop_set.contains(&state)
    }

    /// The controls feasible at `state`, sorted by id.
    pub fn controls(&self, state: usize) -> &[Control] {
        &self.controls[state]
    }

    pub fn control(&self, state: usize, id: usize) -> Option<&Control> {
        self.controls[state].iter().find(|c| c.id == id)
    }

    /// The value `H(x, u, J)` for one feasible control.
    pub fn apply_h(
        &self,
        state: usize,
        control: usize,
        j: &CostFunction,
    ) -> Result<ExtendedReal, ModelError> {
        assert_eq!(j.len(), self.n_states(), "cost function length mismatch");
        let c = self
            .control(state, control)
            .ok_or(ModelError::IllegalControl { state, control })?;
        Ok(self.h_value(c, j))
    }

    /// `H` at a control already known to be feasible.
    fn h_value(&self, control: &Control, j: &CostFunction) -> ExtendedReal {
        let expected: ExtendedReal = control
            .transitions
            .iter()
            .map(|&(p, next)| j[next].scale(p))
            .sum();
        ExtendedReal::new(control.cost) + expected.scale(self.alpha)
    }

    /// The Bellman operator: `(TJ)(x) = min_u H(x, u, J)` at every state,
    /// together with one minimizing policy (lowest control id on ties).
    pub fn apply_t(&self, j: &CostFunction) -> (CostFunction, StationaryPolicy) {
        assert_eq!(j.len(), self.n_states(), "cost function length mismatch");
        let mut values = Vec::with_capacity(self.n_states());
        let mut choice = Vec::with_capacity(self.n_states());
        for ctrls in &self.controls {
            let mut best = self.h_value(&ctrls[0], j);
            let mut best_id = ctrls[0].id;
            for c in &ctrls[1..] {
                let v = self.h_value(c, j);
                if v < best {
                    best = v;
                    best_id = c.id;
                }
            }
            values.push(best);
            choice.push(best_id);
        }
        (
            CostFunction::new(values),
            StationaryPolicy::new_unchecked(choice),
        )
    }

    /// The per-policy operator: `(T_μ J)(x) = H(x, μ(x), J)`.
    pub fn apply_tmu(&self, mu: &StationaryPolicy, j: &CostFunction) -> CostFunction {
        assert_eq!(j.len(), self.n_states(), "cost function length mismatch");
        assert_eq!(mu.len(), self.n_states(), "policy length mismatch");
        (0..self.n_states())
            .map(|x| {
                let c = self
                    .control(x, mu.control(x))
                    .expect("policy validated against this model");
                self.h_value(c, j)
            })
            .collect()
    }

    /// Per-state minimum of `H` over controls together with every control
    /// id attaining it within `tol`. Used by tie-break-aware policy
    /// improvement; ids come out sorted ascending.
    pub fn min_controls(
        &self,
        state: usize,
        j: &CostFunction,
        tol: f64,
    ) -> (ExtendedReal, Vec<usize>) {
        let values: Vec<(usize, ExtendedReal)> = self.controls[state]
            .iter()
            .map(|c| (c.id, self.h_value(c, j)))
            .collect();
        let best = values.iter().map(|&(_, v)| v).min().expect("nonempty U(x)");
        let ids = values
            .iter()
            .filter(|&&(_, v)| v.abs_diff(best) <= ExtendedReal::new(tol))
            .map(|&(id, _)| id)
            .collect();
        (best, ids)
    }

    /// Checks that `mu` selects a feasible control at every state.
    pub fn validate_policy(&self, mu: &StationaryPolicy) -> Result<(), ModelError> {
        if mu.len() != self.n_states() {
            return Err(ModelError::PolicyLengthMismatch {
                got: mu.len(),
                expected: self.n_states(),
            });
        }
        for x in 0..self.n_states() {
            if self.control(x, mu.control(x)).is_none() {
                return Err(ModelError::IllegalControl {
                    state: x,
                    control: mu.control(x),
                });
            }
        }
        Ok(())
    }

    /// Whether `mu` reaches the stop set with probability 1 from every
    /// state (a proper policy).
    ///
    /// For a finite chain with an absorbing stop set this holds exactly
    /// when every state has a directed positive-probability path into
    /// the stop set: any closed set of states avoiding it would be a
    /// recurrent class the chain can never leave. Models with an empty
    /// stop set have no proper policies.
    pub fn is_proper(&self, mu: &StationaryPolicy) -> bool {
        let n = self.n_states();
        if self.stop_set.is_empty() {
            return false;
        }
        // Backward reachability from the stop set along reversed edges.
        let mut reaches: Vec<bool> = (0..n).map(|x| self.is_stop(x)).collect();
        let mut frontier: Vec<usize> = self.stop_set.iter().copied().collect();
        let mut predecessors: Vec<Vec<usize>> = vec![Vec::new(); n];
        for x in 0..n {
            let c = self
                .control(x, mu.control(x))
                .expect("policy validated against this model");
            for &(p, y) in &c.transitions {
                if p > 0.0 {
                    predecessors[y].push(x);
                }
            }
        }
        while let Some(y) = frontier.pop() {
            for &x in &predecessors[y] {
                if !reaches[x] {
                    reaches[x] = true;
                    frontier.push(x);
                }
            }
        }
        reaches.into_iter().all(|r| r)
    }

    /// Number of stationary policies, saturating at `u128::MAX`.
    pub fn policy_count(&self) -> u128 {
        self.controls
            .iter()
            .fold(1u128, |acc, c| acc.saturating_mul(c.len() as u128))
    }

    /// Enumerates every stationary policy in lexicographic control-id
    /// order, guarded by `limit`.
    pub fn enumerate_policies(&self, limit: u128) -> Result<Vec<StationaryPolicy>, ModelError> {
        let count = self.policy_count();
        if count > limit {
            return Err(ModelError::EnumerationLimitExceeded { count, limit });
        }
        let mut policies = Vec::with_capacity(count as usize);
        let mut indices = vec![0usize; self.n_states()];
        loop {
            policies.push(StationaryPolicy::new_unchecked(
                indices
                    .iter()
                    .enumerate()
                    .map(|(x, &i)| self.controls[x][i].id)
                    .collect(),
            ));
            // Odometer increment over per-state control positions.
            let mut x = self.n_states();
            loop {
                if x == 0 {
                    return Ok(policies);
                }
                x -= 1;
                indices[x] += 1;
                if indices[x] < self.controls[x].len() {
                    break;
                }
                indices[x] = 0;
            }
        }
    }
}
