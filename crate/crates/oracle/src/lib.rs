//! Brute-force ground truth for small finite models.
//!
//! Everything here is deliberately slow and simple, so the faster
//! solvers have something trustworthy to be checked against: exhaustive
//! stationary-policy enumeration, exact policy evaluation by a direct
//! linear solve, brute-force optimal and restricted-optimal costs, and
//! per-state divergence certificates.
//!
//! The optimum reported is the minimum over *stationary* policies. For
//! the finite model classes in scope that matches the infimum over all
//! policies whenever an optimal stationary policy exists, which finite
//! control sets guarantee; history-dependent prefixes can be probed
//! through eventually-stationary evaluation upstream, but the sweep
//! here does not search that space.

mod divergence;
mod enumeration;
mod error;
mod linear;
mod optima;

pub use divergence::{certify_divergence, certify_divergence_with, DivergenceCertificate};
pub use enumeration::PolicyEnumeration;
pub use error::OracleError;
pub use linear::{exact_policy_cost, SINGULAR_PIVOT};
pub use optima::{brute_force_optima, OracleResult};
