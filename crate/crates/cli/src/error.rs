use abstract_model::ModelError;
use models::BuildError;
use oracle::OracleError;
use regularity::RegularityError;
use solvers::SolverError;
use thiserror::Error;

use crate::modelfile::SCHEMA_VERSION;

/// Everything a verb can fail with. Model-level validation failures
/// pass through [`ModelError`], which names the offending state and
/// control.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("not valid JSON: {0}")]
    Json(#[from] serde_json::Error),

    #[error("schema_version {got} is not supported (this build reads version {SCHEMA_VERSION})")]
    SchemaVersion { got: u32 },

    #[error("model file must contain exactly one of `builder` or `model`")]
    AmbiguousSource,

    #[error("state list must be the ids 0..{expected} in order; entry {index} has id {got}")]
    BadStateList {
        index: usize,
        got: usize,
        expected: usize,
    },

    #[error("control row {index} references state {state}, but the file declares {n_states} states")]
    RowStateOutOfRange {
        index: usize,
        state: usize,
        n_states: usize,
    },

    #[error("start vector has length {got}, expected {expected}")]
    StartLength { got: usize, expected: usize },

    #[error("lp weight vector has length {got}, expected {expected}")]
    WeightLength { got: usize, expected: usize },

    #[error("scan grid needs finite lo <= hi and a positive step")]
    BadGrid,

    #[error(transparent)]
    Model(#[from] ModelError),

    #[error(transparent)]
    Build(#[from] BuildError),

    #[error(transparent)]
    Solver(#[from] SolverError),

    #[error(transparent)]
    Regularity(#[from] RegularityError),

    #[error(transparent)]
    Oracle(#[from] OracleError),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}
