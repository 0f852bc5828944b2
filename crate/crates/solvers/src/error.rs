use abstract_model::ModelError;
use regularity::RegularityError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SolverError {
    /// Optimistic improvement requires a start at or above its own
    /// one-step image.
    #[error("initial function is below its one-step image at state {state}")]
    NotAboveOperator { state: usize },

    /// The rate check only makes sense from above the restricted
    /// optimum.
    #[error("function is below the restricted optimum at state {state}")]
    BelowRestrictedOptimum { state: usize },

    /// Exact evaluation was requested for a policy whose linear system
    /// does not characterize its cost.
    #[error("policy {policy} is improper; exact evaluation has no linear-system characterization")]
    ImproperPolicyEvaluation { policy: String },

    /// The evaluation system collapsed despite the properness check.
    #[error("linear system for policy {policy} is singular; treating as improper")]
    SingularEvaluation { policy: String },

    #[error("perturbation schedule must be nonempty, positive, and strictly decreasing")]
    BadSchedule,

    #[error("inner solve failed to settle at perturbation {delta}")]
    InnerSolveFailed { delta: f64 },

    #[error("weight at state {state} must be positive and finite")]
    BadWeights { state: usize },

    #[error("region lower boundary is not finite at state {state}; cannot sample starts")]
    NonFiniteBoundary { state: usize },

    #[error("contraction modulus must lie strictly between 0 and 1, got {beta}")]
    BadModulus { beta: f64 },

    #[error("box bounds must be finite with lower < upper")]
    BadBounds,

    #[error("no function satisfies the constraints inside the box")]
    Infeasible,

    #[error("objective is unbounded, which the box should have prevented")]
    Unbounded,

    /// Region bookkeeping failed while building the convergence basin.
    #[error(transparent)]
    Region(#[from] RegularityError),

    #[error(transparent)]
    Model(#[from] ModelError),
}
