use abstract_model::ModelError;
use regularity::RegularityError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum OracleError {
    /// Exact evaluation was asked for a policy that does not reach the
    /// stop set with probability one under total (undiscounted) cost.
    #[error("policy {policy} is improper; its undiscounted cost has no linear-system characterization")]
    ImproperPolicy { policy: String },

    /// The linear system collapsed during elimination. With the
    /// properness precondition checked up front this indicates an
    /// improper policy slipping past the graph classifier, so it is
    /// reported rather than papered over.
    #[error("linear system for policy {policy} is singular (pivot below {floor:e}); treating as improper")]
    SingularSystem { policy: String, floor: f64 },

    /// The model has more stationary policies than the caller allowed.
    #[error("model has {count} stationary policies, over the limit of {limit}")]
    TooManyPolicies { count: u128, limit: u128 },

    #[error(transparent)]
    Model(#[from] ModelError),

    #[error(transparent)]
    Regularity(#[from] RegularityError),
}
