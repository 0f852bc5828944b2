use std::ops::Index;

use serde::{Deserialize, Serialize};

use crate::scalar::ExtendedReal;

/// A cost function J: one extended-real value per state id.
///
/// This is the object the Bellman operators act on. The pointwise
/// partial order `J ≤ J'` is decided componentwise; two functions of
/// different lengths belong to different models and never compare.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CostFunction {
    values: Vec<ExtendedReal>,
}

impl CostFunction {
    pub fn new(values: Vec<ExtendedReal>) -> Self {
        CostFunction { values }
    }

    /// The constant function with the given value at every state.
    pub fn constant(len: usize, value: ExtendedReal) -> Self {
        CostFunction {
            values: vec![value; len],
        }
    }

    /// The zero function, the usual terminal anchor.
    pub fn zeros(len: usize) -> Self {
        Self::constant(len, ExtendedReal::Finite(0.0))
    }

    /// Builds from plain reals.
    ///
    /// # Panics
    ///
    /// Panics if any entry is NaN.
    pub fn from_reals(values: &[f64]) -> Self {
        CostFunction {
            values: values.iter().map(|&v| ExtendedReal::new(v)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[ExtendedReal] {
        &self.values
    }

    pub fn iter(&self) -> impl Iterator<Item = ExtendedReal> + '_ {
        self.values.iter().copied()
    }

    pub fn set(&mut self, state: usize, value: ExtendedReal) {
        self.values[state] = value;
    }

    /// True when every coordinate is finite.
    pub fn is_all_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    /// Pointwise `self ≤ other`.
    ///
    /// # Panics
    ///
    /// Panics on length mismatch.
    pub fn le(&self, other: &Self) -> bool {
        assert_eq!(self.len(), other.len(), "cost function length mismatch");
        self.values
            .iter()
            .zip(&other.values)
            .all(|(a, b)| a <= b)
    }

    /// Pointwise `self ≥ other`.
    ///
    /// # Panics
    ///
    /// Panics on length mismatch.
    pub fn ge(&self, other: &Self) -> bool {
        other.le(self)
    }

    /// Componentwise equality up to an absolute tolerance on finite
    /// values; infinite coordinates must match in sign.
    ///
    /// # Panics
    ///
    /// Panics on length mismatch.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        assert_eq!(self.len(), other.len(), "cost function length mismatch");
        self.values
            .iter()
            .zip(&other.values)
            .all(|(a, b)| a.approx_eq(*b, tol))
    }

    /// Unweighted sup-norm distance: `sup_x |J(x) − J'(x)|`, with
    /// same-sign infinite coordinates contributing zero and any other
    /// infinite pairing making the distance `+∞`.
    ///
    /// # Panics
    ///
    /// Panics on length mismatch.
    pub fn sup_distance(&self, other: &Self) -> ExtendedReal {
        assert_eq!(self.len(), other.len(), "cost function length mismatch");
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a.abs_diff(*b))
            .max()
            .unwrap_or(ExtendedReal::Finite(0.0))
    }
}

impl Index<usize> for CostFunction {
    type Output = ExtendedReal;

    fn index(&self, state: usize) -> &ExtendedReal {
        &self.values[state]
    }
}

impl FromIterator<ExtendedReal> for CostFunction {
    fn from_iter<I: IntoIterator<Item = ExtendedReal>>(iter: I) -> Self {
        CostFunction {
            values: iter.into_iter().collect(),
        }
    }
}

/// Strictly positive per-state weights v defining the weighted sup-norm
/// `‖J‖_v = sup_x |J(x)|/v(x)`.
#[derive(Clone, Debug)]
pub struct WeightedNorm {
    weights: Vec<f64>,
}

impl WeightedNorm {
    /// # Panics
    ///
    /// Panics unless every weight is strictly positive and finite.
    pub fn new(weights: Vec<f64>) -> Self {
        assert!(
            weights.iter().all(|&w| w > 0.0 && w.is_finite()),
            "weights must be strictly positive and finite"
        );
        WeightedNorm { weights }
    }

    /// The unit weights `v ≡ 1` (plain sup-norm).
    pub fn uniform(len: usize) -> Self {
        WeightedNorm {
            weights: vec![1.0; len],
        }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

/// Weighted sup-norm distance `sup_x |J(x) − J'(x)| / v(x)`.
///
/// Coordinates where both values are the same infinity contribute zero;
/// any coordinate with an infinite difference makes the result `+∞`.
///
/// # Panics
///
/// Panics on length mismatch between the functions or the weights.
pub fn weighted_sup_distance(
    j: &CostFunction,
    j2: &CostFunction,
    v: &WeightedNorm,
) -> ExtendedReal {
    assert_eq!(j.len(), j2.len(), "cost function length mismatch");
    assert_eq!(j.len(), v.len(), "weight vector length mismatch");
    j.values
        .iter()
        .zip(&j2.values)
        .zip(&v.weights)
        .map(|((a, b), &w)| a.abs_diff(*b).scale(1.0 / w))
        .max()
        .unwrap_or(ExtendedReal::Finite(0.0))
}
