//! Extended-real scalar arithmetic and cost vectors for total-cost
//! dynamic programming.
//!
//! Everything else in the workspace is built on three types:
//!
//! * [`ExtendedReal`] — a value in ℝ ∪ {−∞, +∞} with a total order and
//!   the minimization-model arithmetic conventions documented on the type.
//! * [`CostFunction`] — a vector of extended reals indexed by state id,
//!   the object the Bellman operators act on.
//! * [`WeightedNorm`] — strictly positive per-state weights defining a
//!   weighted sup-norm distance.
//!
//! All values are immutable once constructed and every operation is a
//! pure function, so they can be used from any number of threads. The
//! single piece of global state is the [`mixed_infinity_events`]
//! counter, which records how often the `(+∞) + (−∞)` convention was
//! actually exercised so downstream reports can flag it.

mod cost;
mod scalar;

pub use cost::{weighted_sup_distance, CostFunction, WeightedNorm};
pub use scalar::{mixed_infinity_events, ExtendedReal};

/// Default absolute tolerance for equality of finite values.
///
/// Fixed-point detection and golden-value assertions use this unless a
/// call site overrides it.
pub const DEFAULT_TOL: f64 = 1e-9;
