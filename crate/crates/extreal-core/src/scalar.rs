use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Neg};
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Counts how many times `(+∞) + (−∞)` has been evaluated process-wide.
static MIXED_INFINITY_EVENTS: AtomicU64 = AtomicU64::new(0);

/// Number of times the `(+∞) + (−∞) = +∞` convention has been exercised
/// since process start.
///
/// The sum of two opposite infinities has no canonical value; this crate
/// resolves it in favor of `+∞` (see [`ExtendedReal`]). That choice is
/// deliberate but worth auditing, so every application of it bumps this
/// counter. Callers that want to know whether a particular computation
/// relied on the convention snapshot the counter before and after.
pub fn mixed_infinity_events() -> u64 {
    MIXED_INFINITY_EVENTS.load(AtomicOrdering::Relaxed)
}

/// A value in ℝ ∪ {−∞, +∞}.
///
/// Finite payloads are never NaN; constructors enforce this. The order
/// is total: `NegInf < Finite(a) < Finite(b) < PosInf` for `a < b`.
///
/// Arithmetic follows the conventions of minimization-model dynamic
/// programming:
///
/// * `x + (±∞) = ±∞` for finite `x`, and `(+∞) + (−∞) = +∞`: a branch
///   of infinite cost dominates when minimizing. Applications of the
///   mixed-infinity rule are counted by [`mixed_infinity_events`].
/// * `0 · (±∞) = 0` in [`scale`](ExtendedReal::scale): zero-probability
///   successor states contribute nothing to an expectation.
///
/// Infinities of the same sign compare equal, which is what fixed-point
/// detection needs when iterates have infinite coordinates.
#[derive(Clone, Copy, Debug)]
pub enum ExtendedReal {
    NegInf,
    Finite(f64),
    PosInf,
}

use ExtendedReal::{Finite, NegInf, PosInf};

impl ExtendedReal {
    /// Wraps a finite value.
    ///
    /// # Panics
    ///
    /// Panics if `value` is NaN; infinite `f64`s map to the matching
    /// infinity variant.
    pub fn new(value: f64) -> Self {
        assert!(!value.is_nan(), "ExtendedReal cannot hold NaN");
        if value == f64::INFINITY {
            PosInf
        } else if value == f64::NEG_INFINITY {
            NegInf
        } else {
            Finite(value)
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Finite(_))
    }

    /// The finite payload, if any.
    pub fn as_finite(self) -> Option<f64> {
        match self {
            Finite(v) => Some(v),
            _ => None,
        }
    }

    /// The finite payload, panicking on infinities.
    ///
    /// # Panics
    ///
    /// Panics if the value is `±∞`.
    pub fn unwrap_finite(self) -> f64 {
        match self {
            Finite(v) => v,
            other => panic!("expected a finite value, got {other}"),
        }
    }

    /// Conversion to `f64`, mapping infinities to IEEE infinities.
    pub fn to_f64(self) -> f64 {
        match self {
            NegInf => f64::NEG_INFINITY,
            Finite(v) => v,
            PosInf => f64::INFINITY,
        }
    }

    /// Multiplication by a nonnegative scalar with the `0 · (±∞) = 0`
    /// convention.
    ///
    /// # Panics
    ///
    /// Panics if `p` is negative or NaN.
    pub fn scale(self, p: f64) -> Self {
        assert!(p >= 0.0, "scale factor must be nonnegative, got {p}");
        if p == 0.0 {
            return Finite(0.0);
        }
        match self {
            NegInf => NegInf,
            Finite(v) => ExtendedReal::new(p * v),
            PosInf => PosInf,
        }
    }

    /// Absolute difference, treating same-sign infinities as coincident:
    /// `|(+∞) − (+∞)| = |(−∞) − (−∞)| = 0`, any other pair involving an
    /// infinity has distance `+∞`.
    pub fn abs_diff(self, other: Self) -> Self {
        match (self, other) {
            (Finite(a), Finite(b)) => Finite((a - b).abs()),
            (PosInf, PosInf) | (NegInf, NegInf) => Finite(0.0),
            _ => PosInf,
        }
    }

    /// Equality up to an absolute tolerance on finite values; infinities
    /// are equal exactly when their signs match.
    pub fn approx_eq(self, other: Self, tol: f64) -> bool {
        match (self, other) {
            (Finite(a), Finite(b)) => (a - b).abs() <= tol,
            (PosInf, PosInf) | (NegInf, NegInf) => true,
            _ => false,
        }
    }
}

impl Add for ExtendedReal {
    type Output = ExtendedReal;

    fn add(self, rhs: ExtendedReal) -> ExtendedReal {
        match (self, rhs) {
            // Routed through `new` so f64 overflow lands on the infinity
            // variants instead of a `Finite(inf)` payload.
            (Finite(a), Finite(b)) => ExtendedReal::new(a + b),
            (PosInf, NegInf) | (NegInf, PosInf) => {
                MIXED_INFINITY_EVENTS.fetch_add(1, AtomicOrdering::Relaxed);
                PosInf
            }
            (PosInf, _) | (_, PosInf) => PosInf,
            (NegInf, _) | (_, NegInf) => NegInf,
        }
    }
}

impl AddAssign for ExtendedReal {
    fn add_assign(&mut self, rhs: ExtendedReal) {
        *self = *self + rhs;
    }
}

impl Neg for ExtendedReal {
    type Output = ExtendedReal;

    fn neg(self) -> ExtendedReal {
        match self {
            NegInf => PosInf,
            Finite(v) => Finite(-v),
            PosInf => NegInf,
        }
    }
}

impl Sum for ExtendedReal {
    fn sum<I: Iterator<Item = ExtendedReal>>(iter: I) -> ExtendedReal {
        iter.fold(Finite(0.0), Add::add)
    }
}

impl PartialEq for ExtendedReal {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Finite(a), Finite(b)) => a == b,
            (PosInf, PosInf) | (NegInf, NegInf) => true,
            _ => false,
        }
    }
}

impl Eq for ExtendedReal {}

impl PartialOrd for ExtendedReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtendedReal {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Finite(a), Finite(b)) => a.total_cmp(b),
            (NegInf, NegInf) | (PosInf, PosInf) => Ordering::Equal,
            (NegInf, _) | (_, PosInf) => Ordering::Less,
            (PosInf, _) | (_, NegInf) => Ordering::Greater,
        }
    }
}

impl From<f64> for ExtendedReal {
    fn from(value: f64) -> Self {
        ExtendedReal::new(value)
    }
}

impl fmt::Display for ExtendedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NegInf => f.write_str("-inf"),
            Finite(v) => write!(f, "{v}"),
            PosInf => f.write_str("+inf"),
        }
    }
}

// Structured file formats carry infinities as the string sentinels
// "+inf"/"-inf" and finite values as plain numbers.

impl Serialize for ExtendedReal {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            NegInf => serializer.serialize_str("-inf"),
            Finite(v) => serializer.serialize_f64(*v),
            PosInf => serializer.serialize_str("+inf"),
        }
    }
}

struct ExtendedRealVisitor;

impl Visitor<'_> for ExtendedRealVisitor {
    type Value = ExtendedReal;

    fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("a finite number or the string \"+inf\" or \"-inf\"")
    }

    fn visit_f64<E: de::Error>(self, v: f64) -> Result<ExtendedReal, E> {
        if v.is_nan() {
            return Err(E::custom("NaN is not a valid extended real"));
        }
        Ok(ExtendedReal::new(v))
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<ExtendedReal, E> {
        Ok(Finite(v as f64))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<ExtendedReal, E> {
        Ok(Finite(v as f64))
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<ExtendedReal, E> {
        match v {
            "+inf" => Ok(PosInf),
            "-inf" => Ok(NegInf),
            other => Err(E::custom(format!(
                "expected \"+inf\" or \"-inf\", got {other:?}"
            ))),
        }
    }
}

impl<'de> Deserialize<'de> for ExtendedReal {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        deserializer.deserialize_any(ExtendedRealVisitor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn add_follows_minimization_conventions() {
        assert_eq!(Finite(2.0) + Finite(3.0), Finite(5.0));
        assert_eq!(Finite(1.0) + PosInf, PosInf);
        assert_eq!(Finite(1.0) + NegInf, NegInf);
        let before = mixed_infinity_events();
        assert_eq!(PosInf + NegInf, PosInf);
        assert_eq!(NegInf + PosInf, PosInf);
        assert_eq!(mixed_infinity_events() - before, 2);
    }

    #[test]
    fn scale_conventions() {
        assert_eq!(PosInf.scale(0.0), Finite(0.0));
        assert_eq!(NegInf.scale(0.0), Finite(0.0));
        assert_eq!(Finite(4.0).scale(0.5), Finite(2.0));
        assert_eq!(NegInf.scale(1.0), NegInf);
    }

    #[test]
    #[should_panic(expected = "nonnegative")]
    fn scale_rejects_negative_factor() {
        let _ = Finite(1.0).scale(-0.25);
    }

    #[test]
    fn total_order() {
        assert!(NegInf < Finite(-1e300));
        assert!(Finite(-1e300) < Finite(0.0));
        assert!(Finite(1e300) < PosInf);
        assert_eq!(PosInf, PosInf);
        assert_eq!(NegInf, NegInf);
        assert_ne!(PosInf, NegInf);
    }

    #[test]
    fn ieee_infinities_normalize_to_variants() {
        assert_eq!(ExtendedReal::new(f64::INFINITY), PosInf);
        assert_eq!(ExtendedReal::new(f64::NEG_INFINITY), NegInf);
    }

    #[test]
    fn serde_round_trip() {
        let vals = [Finite(1.5), PosInf, NegInf];
        let json = serde_json::to_string(&vals).unwrap();
        assert_eq!(json, r#"[1.5,"+inf","-inf"]"#);
        let back: Vec<ExtendedReal> = serde_json::from_str(&json).unwrap();
        assert_eq!(back, vals);
        let from_int: ExtendedReal = serde_json::from_str("3").unwrap();
        assert_eq!(from_int, Finite(3.0));
    }
}
