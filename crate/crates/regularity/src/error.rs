use abstract_model::ModelError;
use thiserror::Error;

/// Errors from classification and scanning routines.
#[derive(Debug, Error)]
pub enum RegularityError {
    /// Properness is reachability of the stop set; without one the
    /// question is ill-posed.
    #[error("model has no stop set; properness is undefined")]
    MissingStopSet,
    /// The per-state grids would enumerate more points than the guard
    /// allows.
    #[error("grid product {product} exceeds the scan guard {limit}")]
    GridTooLarge { product: u128, limit: u128 },
    /// One grid per state is required.
    #[error("expected {expected} per-state grids, got {got}")]
    GridArityMismatch { expected: usize, got: usize },
    /// Every state needs at least one grid value.
    #[error("state {state} has an empty value grid")]
    EmptyGrid { state: usize },
    /// A supplied probe fails the region's membership predicate.
    #[error("probe {index} lies outside the region")]
    ProbeOutsideRegion { index: usize },
    #[error(transparent)]
    Model(#[from] ModelError),
}
