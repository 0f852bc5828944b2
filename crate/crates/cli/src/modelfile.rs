//! Versioned model-file schema.
//!
//! A model file is a JSON document carrying either explicit
//! state/control tables or a named builder invocation, never both.
//! Extended-real values are encoded as plain numbers with the string
//! sentinels `"+inf"` / `"-inf"` for the two infinities, which keeps
//! the files diff-friendly for golden tests.

use std::fmt;
use std::str::FromStr;

use abstract_model::{Control, FiniteModel};
use extreal_core::{CostFunction, ExtendedReal};
use models::{
    build_detsp, build_discounted, build_grid_control, build_nonneg_mdp, build_random_ssp,
    DetSpParams, GridControlParams,
};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use sha2::{Digest, Sha256};

use crate::error::CliError;

pub const SCHEMA_VERSION: u32 = 1;

/// Extended real with the file encoding: a JSON number when finite,
/// `"+inf"` / `"-inf"` otherwise.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExtReal(pub ExtendedReal);

impl Serialize for ExtReal {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self.0 {
            ExtendedReal::Finite(x) => serializer.serialize_f64(x),
            ExtendedReal::PosInf => serializer.serialize_str("+inf"),
            ExtendedReal::NegInf => serializer.serialize_str("-inf"),
        }
    }
}

impl<'de> Deserialize<'de> for ExtReal {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct ExtRealVisitor;

        impl Visitor<'_> for ExtRealVisitor {
            type Value = ExtReal;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a finite number, \"+inf\", or \"-inf\"")
            }

            fn visit_f64<E: de::Error>(self, x: f64) -> Result<ExtReal, E> {
                if x.is_finite() {
                    Ok(ExtReal(ExtendedReal::new(x)))
                } else {
                    Err(E::custom("non-finite numbers must use the string sentinels"))
                }
            }

            fn visit_i64<E: de::Error>(self, x: i64) -> Result<ExtReal, E> {
                self.visit_f64(x as f64)
            }

            fn visit_u64<E: de::Error>(self, x: u64) -> Result<ExtReal, E> {
                self.visit_f64(x as f64)
            }

            fn visit_str<E: de::Error>(self, s: &str) -> Result<ExtReal, E> {
                match s {
                    "+inf" => Ok(ExtReal(ExtendedReal::PosInf)),
                    "-inf" => Ok(ExtReal(ExtendedReal::NegInf)),
                    other => Err(E::custom(format!(
                        "unknown value sentinel {other:?} (expected \"+inf\" or \"-inf\")"
                    ))),
                }
            }
        }

        deserializer.deserialize_any(ExtRealVisitor)
    }
}

impl FromStr for ExtReal {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "+inf" => Ok(ExtReal(ExtendedReal::PosInf)),
            "-inf" => Ok(ExtReal(ExtendedReal::NegInf)),
            other => {
                let x: f64 = other
                    .parse()
                    .map_err(|_| format!("{other:?} is not a number, \"+inf\", or \"-inf\""))?;
                if x.is_finite() {
                    Ok(ExtReal(ExtendedReal::new(x)))
                } else {
                    Err(format!("{other:?} is not finite; use \"+inf\" / \"-inf\""))
                }
            }
        }
    }
}

pub fn cost_to_ext(j: &CostFunction) -> Vec<ExtReal> {
    j.iter().map(ExtReal).collect()
}

pub fn ext_to_cost(values: &[ExtReal]) -> CostFunction {
    values.iter().map(|v| v.0).collect()
}

/// The document root. Exactly one of `builder` / `model` is present.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub schema_version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub builder: Option<BuilderSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<ModelTables>,
}

/// Named builder invocation in lieu of explicit tables.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case", deny_unknown_fields)]
pub enum BuilderSpec {
    Detsp {
        a: f64,
        b: f64,
    },
    GridUnit {
        n: usize,
    },
    GridTerminalReward {
        n: usize,
        reward: f64,
    },
    GridUniform {
        n: usize,
        left: f64,
        right: f64,
        stay: f64,
    },
    RandomSsp {
        states: usize,
        controls: usize,
        cost_lo: f64,
        cost_hi: f64,
        proper_bias: f64,
        seed: u64,
    },
    NonnegMdp {
        states: usize,
        controls: usize,
        seed: u64,
    },
    Discounted {
        states: usize,
        controls: usize,
        alpha: f64,
        seed: u64,
    },
}

impl BuilderSpec {
    pub fn build(&self) -> Result<FiniteModel, CliError> {
        let model = match *self {
            BuilderSpec::Detsp { a, b } => build_detsp(DetSpParams { a, b }),
            BuilderSpec::GridUnit { n } => build_grid_control(&GridControlParams::unit_moves(n))?,
            BuilderSpec::GridTerminalReward { n, reward } => {
                build_grid_control(&GridControlParams::terminal_reward(n, reward))?
            }
            BuilderSpec::GridUniform {
                n,
                left,
                right,
                stay,
            } => build_grid_control(&GridControlParams::uniform(n, left, right, stay))?,
            BuilderSpec::RandomSsp {
                states,
                controls,
                cost_lo,
                cost_hi,
                proper_bias,
                seed,
            } => build_random_ssp(states, controls, (cost_lo, cost_hi), proper_bias, seed)?,
            BuilderSpec::NonnegMdp {
                states,
                controls,
                seed,
            } => build_nonneg_mdp(states, controls, seed)?,
            BuilderSpec::Discounted {
                states,
                controls,
                alpha,
                seed,
            } => build_discounted(states, controls, alpha, seed)?,
        };
        Ok(model)
    }
}

/// Explicit tables: one row per (state, control).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelTables {
    pub states: Vec<StateDecl>,
    pub stop_set: Vec<usize>,
    pub discount: f64,
    pub terminal: Vec<ExtReal>,
    pub controls: Vec<ControlRow>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateDecl {
    pub id: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ControlRow {
    pub state: usize,
    pub control: usize,
    pub cost: f64,
    pub transitions: Vec<(f64, usize)>,
}

impl ModelFile {
    /// Wraps a builder invocation.
    pub fn from_builder(builder: BuilderSpec) -> ModelFile {
        ModelFile {
            schema_version: SCHEMA_VERSION,
            builder: Some(builder),
            model: None,
        }
    }

    /// Emits a model as explicit tables (the canonical form `generate`
    /// writes).
    pub fn from_model(model: &FiniteModel) -> ModelFile {
        let n = model.n_states();
        let states = (0..n).map(|id| StateDecl { id, label: None }).collect();
        let mut rows = Vec::new();
        for state in 0..n {
            for c in model.controls(state) {
                rows.push(ControlRow {
                    state,
                    control: c.id,
                    cost: c.cost,
                    transitions: c.transitions.clone(),
                });
            }
        }
        ModelFile {
            schema_version: SCHEMA_VERSION,
            builder: None,
            model: Some(ModelTables {
                states,
                stop_set: model.stop_set().iter().copied().collect(),
                discount: model.alpha(),
                terminal: cost_to_ext(model.terminal()),
                controls: rows,
            }),
        }
    }

    pub fn parse_str(text: &str) -> Result<ModelFile, CliError> {
        let file: ModelFile = serde_json::from_str(text)?;
        if file.schema_version != SCHEMA_VERSION {
            return Err(CliError::SchemaVersion {
                got: file.schema_version,
            });
        }
        Ok(file)
    }

    /// Instantiates the model, whichever form the file used. Table
    /// validation failures carry the offending state and control.
    pub fn to_model(&self) -> Result<FiniteModel, CliError> {
        match (&self.builder, &self.model) {
            (Some(builder), None) => builder.build(),
            (None, Some(tables)) => tables.to_model(),
            _ => Err(CliError::AmbiguousSource),
        }
    }

    /// Canonical serialization: pretty JSON with a trailing newline.
    /// Byte-stable for a given file value, which is what makes
    /// `generate` deterministic.
    pub fn to_json(&self) -> String {
        let mut text =
            serde_json::to_string_pretty(self).expect("model files always serialize");
        text.push('\n');
        text
    }
}

impl ModelTables {
    fn to_model(&self) -> Result<FiniteModel, CliError> {
        let n = self.states.len();
        for (index, decl) in self.states.iter().enumerate() {
            if decl.id != index {
                return Err(CliError::BadStateList {
                    index,
                    got: decl.id,
                    expected: n,
                });
            }
        }
        let mut controls: Vec<Vec<Control>> = vec![Vec::new(); n];
        for (index, row) in self.controls.iter().enumerate() {
            if row.state >= n {
                return Err(CliError::RowStateOutOfRange {
                    index,
                    state: row.state,
                    n_states: n,
                });
            }
            controls[row.state].push(Control::new(row.control, row.cost, row.transitions.clone()));
        }
        let model = FiniteModel::new(
            controls,
            self.discount,
            ext_to_cost(&self.terminal),
            self.stop_set.iter().copied(),
        )?;
        Ok(model)
    }
}

/// Content hash embedded in every report: SHA-256 over the exact bytes
/// of the model file.
pub fn content_hash(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    format!("sha256:{:x}", hasher.finalize())
}
