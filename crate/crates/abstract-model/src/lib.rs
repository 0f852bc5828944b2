//! Finite abstract dynamic-programming models and the operators that act
//! on cost functions.
//!
//! A [`FiniteModel`] packages states, per-state control sets, finite
//! transition distributions, stage costs, a discount factor, a terminal
//! cost function, and an optional stopping set. It realizes the mapping
//!
//! ```text
//! H(x, u, J) = g(x, u) + α · Σ_y p(y | x, u) · J(y)
//! ```
//!
//! from which everything else is built: the Bellman operator `T`
//! (pointwise infimum of `H` over controls), the per-policy operator
//! `T_μ`, finite-horizon compositions, and the limsup policy cost of
//! eventually-stationary policies with divergence certificates.
//!
//! Models and policies are immutable after construction, and all
//! operator applications are pure per-state computations.

mod cost_eval;
mod error;
mod model;
mod policy;

pub use cost_eval::{
    compose_prefix, policy_cost, policy_cost_from, restricted_opt_cost, CostCertificate,
    PolicyCostOptions, PolicyCostResult, RestrictedOptOptions,
};
pub use error::ModelError;
pub use model::{Control, FiniteModel, PROBABILITY_TOL};
pub use policy::{EventuallyStationaryPolicy, PairSetDescriptor, StationaryPolicy};
