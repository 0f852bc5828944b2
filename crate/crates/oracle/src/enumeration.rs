//! Streaming enumeration of stationary policies.

use abstract_model::{FiniteModel, StationaryPolicy};

/// Iterator over every stationary policy of a model, one control choice
/// per state, in lexicographic control-id order with the last state
/// varying fastest. Yields each policy exactly once;
/// [`total`](PolicyEnumeration::total) policies in all.
///
/// Unlike materializing the whole product up front, the iterator holds
/// one cursor, so callers can bail out early or cap work externally.
pub struct PolicyEnumeration<'a> {
    model: &'a FiniteModel,
    /// Per-state positions into the control lists; `None` once spent.
    cursor: Option<Vec<usize>>,
}

impl<'a> PolicyEnumeration<'a> {
    pub fn new(model: &'a FiniteModel) -> Self {
        let cursor = if model.n_states() == 0 {
            None
        } else {
            Some(vec![0; model.n_states()])
        };
        PolicyEnumeration { model, cursor }
    }

    /// Product of the per-state control-set sizes, saturating.
    pub fn total(&self) -> u128 {
        self.model.policy_count()
    }
}

impl Iterator for PolicyEnumeration<'_> {
    type Item = StationaryPolicy;

    fn next(&mut self) -> Option<StationaryPolicy> {
        let cursor = self.cursor.as_mut()?;
        let policy = StationaryPolicy::new_unchecked(
            cursor
                .iter()
                .enumerate()
                .map(|(x, &i)| self.model.controls(x)[i].id)
                .collect(),
        );

        // Odometer increment, last state fastest.
        let mut x = cursor.len();
        loop {
            if x == 0 {
                self.cursor = None;
                break;
            }
            x -= 1;
            cursor[x] += 1;
            if cursor[x] < self.model.controls(x).len() {
                break;
            }
            cursor[x] = 0;
        }
        Some(policy)
    }
}
