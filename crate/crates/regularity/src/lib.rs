//! Classification machinery for total-cost models: which stationary
//! policies are proper, which are regular relative to a region of cost
//! functions, the best cost achievable by the regular ones, where the
//! Bellman operator's fixed points sit, and whether policy iteration
//! can be kept inside the regular policies.
//!
//! Regularity of a policy relative to a region `S` means three things
//! at once: its cost function belongs to `S`, solves the policy's own
//! fixed-point equation, and attracts the policy's operator iterates
//! from every function in `S`. The last clause quantifies over an
//! infinite set, so this crate checks it against a finite probe sample
//! and reports three-valued verdicts — `Certified` results are always
//! relative to the probe set, `Refuted` ones rest on a clause that
//! provably failed.
//!
//! Everything here works on immutable models and returns plain data;
//! classification sweeps build their caches single-threaded and the
//! results are safe to read concurrently afterwards.

mod certify;
mod chain;
mod error;
mod pi_checks;
mod region;
mod report;
mod scan;
mod wellbehaved;

pub use certify::{
    certify_s_regular, classify_policies, opt_from_records, opt_over_regular, PolicyRecord,
    RegularityVerdict,
};
pub use chain::{classify_proper, closed_recurrent_classes, deterministic_chain, recurrent_union};
pub use error::RegularityError;
pub use pi_checks::{
    check_strong_pi_conditions, check_weak_pi_property, StrongPiReport, WeakPiReport,
};
pub use region::{RegularityOptions, SRegionDescriptor, SRegionKind, DEFAULT_PROBE_COUNT};
pub use report::{build_regularity_report, RegularityReport};
pub use scan::{fixed_point_scan, uniform_grid, GRID_PRODUCT_LIMIT};
pub use wellbehaved::{well_behaved_region, WellBehavedRegion};
