//! Workbench plumbing behind the `regdp` binary: the versioned model
//! file schema, the experiment configuration that is embedded in every
//! report, and the verb engines themselves. The binary is a thin
//! argument layer over this crate, so tests can drive the exact code
//! paths the command line does.
//!
//! Reports are JSON documents of the shape
//! `{schema_version, model_hash, config, result}`; iteration traces are
//! CSV with the column order `iteration, j_0, …, j_{n-1}, residual`.
//!
//! Exit codes are a total function of how a run ended:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | converged, or the verb completed |
//! | 1 | runtime error: unreadable or invalid files, violated preconditions |
//! | 2 | usage error (argument parsing) |
//! | 3 | stalled: iteration budget exhausted, or parked at a fixed point |
//! | 4 | oscillating: a value or policy cycle was detected |
//! | 5 | diverged: a sustained-drift certificate fired |

pub mod config;
pub mod error;
pub mod io;
pub mod modelfile;
pub mod run;

pub use config::{
    Algo, EvalChoice, ExperimentConfig, RegionChoice, StartKeyword, StartSpec, TieBreakChoice,
};
pub use error::CliError;
pub use io::atomic_write;
pub use modelfile::{
    content_hash, cost_to_ext, ext_to_cost, BuilderSpec, ControlRow, ExtReal, ModelFile,
    ModelTables, StateDecl, SCHEMA_VERSION,
};
pub use run::{
    exit_code_for, run_classify, run_oracle, run_report, run_scan, run_solve, VerbOutput,
    EXIT_CONVERGED, EXIT_DIVERGED, EXIT_ERROR, EXIT_OSCILLATING, EXIT_STALLED, EXIT_USAGE,
};
