use thiserror::Error;

/// Model construction and operator preconditions that can fail on data.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("state {state} has an empty control set")]
    EmptyControlSet { state: usize },

    #[error("state {state} declares control id {control} more than once")]
    DuplicateControlId { state: usize, control: usize },

    #[error("control {control} at state {state} has transition probabilities summing to {sum}, expected 1")]
    BadProbabilities {
        state: usize,
        control: usize,
        sum: f64,
    },

    #[error("control {control} at state {state} references state {next}, but the model has {n_states} states")]
    BadNextState {
        state: usize,
        control: usize,
        next: usize,
        n_states: usize,
    },

    #[error("discount factor {alpha} is outside (0, 1]")]
    BadDiscount { alpha: f64 },

    #[error("terminal cost function has length {got}, expected {expected}")]
    TerminalLengthMismatch { got: usize, expected: usize },

    #[error("stop state {state} is not cost-free and absorbing (control {control})")]
    StopSetNotAbsorbing { state: usize, control: usize },

    #[error("stop set references state {state}, but the model has {n_states} states")]
    BadStopState { state: usize, n_states: usize },

    #[error("control id {control} is not feasible at state {state}")]
    IllegalControl { state: usize, control: usize },

    #[error("policy has length {got}, expected {expected}")]
    PolicyLengthMismatch { got: usize, expected: usize },

    #[error("{count} stationary policies exceed the enumeration limit {limit}")]
    EnumerationLimitExceeded { count: u128, limit: u128 },
}
