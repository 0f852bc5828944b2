//! Experiment configuration.
//!
//! Every field has a default, and the fully resolved configuration is
//! embedded verbatim in every report next to the model-file hash, so a
//! report plus the model file is enough to rerun the experiment.

use std::path::PathBuf;
use std::str::FromStr;

use abstract_model::FiniteModel;
use clap::ValueEnum;
use extreal_core::{CostFunction, ExtendedReal};
use regularity::SRegionKind;
use serde::{Deserialize, Serialize};
use solvers::TieBreakRule;

use crate::error::CliError;
use crate::modelfile::ExtReal;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Algo {
    Vi,
    Pi,
    Opi,
    Lp,
    Perturbation,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum TieBreakChoice {
    #[default]
    KeepCurrent,
    LowestId,
    AlwaysSwitch,
}

impl From<TieBreakChoice> for TieBreakRule {
    fn from(choice: TieBreakChoice) -> TieBreakRule {
        match choice {
            TieBreakChoice::KeepCurrent => TieBreakRule::KeepCurrentIfTied,
            TieBreakChoice::LowestId => TieBreakRule::LowestControlId,
            TieBreakChoice::AlwaysSwitch => TieBreakRule::AlwaysSwitchIfTied,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum EvalChoice {
    /// Evaluate policies by capped operator iteration; tolerates
    /// improper policies by certifying their divergence.
    #[default]
    Iterative,
    /// Evaluate policies by direct linear solve; rejects improper
    /// policies in undiscounted models.
    Exact,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum RegionChoice {
    #[default]
    AllReal,
    NonnegExtended,
    BoundedBelow,
    ZeroOnStopSet,
    ExpectationVanishing,
}

impl From<RegionChoice> for SRegionKind {
    fn from(choice: RegionChoice) -> SRegionKind {
        match choice {
            RegionChoice::AllReal => SRegionKind::AllReal,
            RegionChoice::NonnegExtended => SRegionKind::NonnegExtended,
            RegionChoice::BoundedBelow => SRegionKind::BoundedBelow,
            RegionChoice::ZeroOnStopSet => SRegionKind::ZeroOnStopSet,
            RegionChoice::ExpectationVanishing => SRegionKind::ExpectationVanishing,
        }
    }
}

/// Where value-style solvers start.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StartSpec {
    Keyword(StartKeyword),
    /// This value at every non-stop state, zero on the stop set.
    Constant(f64),
    /// One value per state, in id order.
    Explicit(Vec<ExtReal>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StartKeyword {
    Terminal,
}

impl Default for StartSpec {
    fn default() -> Self {
        StartSpec::Keyword(StartKeyword::Terminal)
    }
}

impl FromStr for StartSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s == "terminal" {
            return Ok(StartSpec::default());
        }
        if s.contains(',') {
            let values = s
                .split(',')
                .map(|part| part.trim().parse::<ExtReal>())
                .collect::<Result<Vec<_>, _>>()?;
            return Ok(StartSpec::Explicit(values));
        }
        let x: f64 = s
            .parse()
            .map_err(|_| format!("{s:?} is not \"terminal\", a number, or a comma-separated list"))?;
        if !x.is_finite() {
            return Err("a constant start must be finite; spell a vector out to use \"+inf\"".into());
        }
        Ok(StartSpec::Constant(x))
    }
}

impl StartSpec {
    pub fn resolve(&self, model: &FiniteModel) -> Result<CostFunction, CliError> {
        match self {
            StartSpec::Keyword(StartKeyword::Terminal) => Ok(model.terminal().clone()),
            StartSpec::Constant(c) => Ok((0..model.n_states())
                .map(|x| {
                    if model.is_stop(x) {
                        ExtendedReal::new(0.0)
                    } else {
                        ExtendedReal::new(*c)
                    }
                })
                .collect()),
            StartSpec::Explicit(values) => {
                if values.len() != model.n_states() {
                    return Err(CliError::StartLength {
                        got: values.len(),
                        expected: model.n_states(),
                    });
                }
                Ok(values.iter().map(|v| v.0).collect())
            }
        }
    }
}

/// Full description of one solver run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub algo: Algo,
    pub tol: f64,
    pub max_iter: usize,
    /// Divergence-certificate threshold for value iteration and for
    /// iterative policy evaluation, scaled for desk-size models.
    pub blowup_bound: f64,
    /// Iteration budget for classification probes.
    pub horizon_cap: usize,
    pub start: StartSpec,
    /// Initial policy for pi, one control id per state; lowest id
    /// everywhere when absent.
    pub start_policy: Option<Vec<usize>>,
    pub tie_break: TieBreakChoice,
    pub eval_mode: EvalChoice,
    /// Evaluation steps per opi round; the last entry repeats.
    pub m_schedule: Vec<usize>,
    /// Perturbation magnitudes, strictly decreasing.
    pub delta_schedule: Vec<f64>,
    pub lp_lower: f64,
    pub lp_upper: f64,
    /// One positive weight per state; all ones when absent.
    pub lp_weights: Option<Vec<f64>>,
    pub region: RegionChoice,
    pub seed: u64,
    pub out_summary: Option<PathBuf>,
    pub out_trace: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            algo: Algo::Vi,
            tol: solvers::DEFAULT_SOLVE_TOL,
            max_iter: solvers::DEFAULT_MAX_ITER,
            blowup_bound: 1e4,
            horizon_cap: 20_000,
            start: StartSpec::default(),
            start_policy: None,
            tie_break: TieBreakChoice::default(),
            eval_mode: EvalChoice::default(),
            m_schedule: vec![5],
            delta_schedule: solvers::PerturbationSchedule::default().deltas().to_vec(),
            lp_lower: -1e6,
            lp_upper: 1e6,
            lp_weights: None,
            region: RegionChoice::default(),
            seed: 0,
            out_summary: None,
            out_trace: None,
        }
    }
}
