use std::fmt;

use crate::error::ModelError;
use crate::model::FiniteModel;

/// A stationary policy: one control id per state.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StationaryPolicy {
    choice: Vec<usize>,
}

impl StationaryPolicy {
    /// Builds a policy and checks feasibility against the model.
    pub fn new(model: &FiniteModel, choice: Vec<usize>) -> Result<Self, ModelError> {
        let mu = StationaryPolicy { choice };
        model.validate_policy(&mu)?;
        Ok(mu)
    }

    /// Builds without validation; for callers that construct choices
    /// straight from a model's own control table.
    pub fn new_unchecked(choice: Vec<usize>) -> Self {
        StationaryPolicy { choice }
    }

    pub fn len(&self) -> usize {
        self.choice.len()
    }

    pub fn is_empty(&self) -> bool {
        self.choice.is_empty()
    }

    /// The control id chosen at `state`.
    pub fn control(&self, state: usize) -> usize {
        self.choice[state]
    }

    pub fn controls(&self) -> &[usize] {
        &self.choice
    }
}

impl fmt::Display for StationaryPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.choice.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

/// A nonstationary policy in eventually-stationary form: a finite prefix
/// `μ₀, …, μ_{m−1}` followed by a stationary tail.
///
/// This is a representational restriction: general policies are
/// arbitrary sequences, but every limit and infimum the artifact
/// reproduces on finite models is attained within this family.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EventuallyStationaryPolicy {
    pub prefix: Vec<StationaryPolicy>,
    pub tail: StationaryPolicy,
}

impl EventuallyStationaryPolicy {
    pub fn new(prefix: Vec<StationaryPolicy>, tail: StationaryPolicy) -> Self {
        EventuallyStationaryPolicy { prefix, tail }
    }

    /// A purely stationary policy (empty prefix).
    pub fn stationary(mu: StationaryPolicy) -> Self {
        EventuallyStationaryPolicy {
            prefix: Vec::new(),
            tail: mu,
        }
    }

    pub fn is_stationary(&self) -> bool {
        self.prefix.is_empty()
    }
}

impl From<StationaryPolicy> for EventuallyStationaryPolicy {
    fn from(mu: StationaryPolicy) -> Self {
        EventuallyStationaryPolicy::stationary(mu)
    }
}

/// Which policy-state pairs an infimum ranges over.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PairSetDescriptor {
    /// Every (policy, state) pair.
    AllPairs,
    /// Pairs with finite-from-above cost: `J_π(x) < +∞`.
    FiniteCostPairs,
    /// Pairs whose policy belongs to a caller-supplied set of certified
    /// regular stationary policies (membership is decided upstream,
    /// where the regularity machinery lives).
    RegularStationaryPairs { regular: Vec<StationaryPolicy> },
}
