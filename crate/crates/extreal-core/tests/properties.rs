use extreal_core::{weighted_sup_distance, CostFunction, ExtendedReal, WeightedNorm};
use proptest::prelude::*;

use ExtendedReal::{Finite, NegInf, PosInf};

const TOL: f64 = 1e-9;

fn scalar() -> impl Strategy<Value = ExtendedReal> {
    prop_oneof![
        4 => (-1000.0..1000.0f64).prop_map(ExtendedReal::new),
        1 => Just(PosInf),
        1 => Just(NegInf),
    ]
}

fn finite_vec(len: usize) -> impl Strategy<Value = CostFunction> {
    proptest::collection::vec(-1000.0..1000.0f64, len)
        .prop_map(|v| CostFunction::from_reals(&v))
}

/// Every 3-element tag combination occurs with random finite payloads, so
/// the add laws get exercised on all 27 infinity patterns.
fn add_laws_hold(a: ExtendedReal, b: ExtendedReal, c: ExtendedReal) {
    assert_eq!(a + b, b + a);
    let left = (a + b) + c;
    let right = a + (b + c);
    assert!(
        left.approx_eq(right, TOL),
        "associativity failed: ({a} + {b}) + {c} = {left} but {a} + ({b} + {c}) = {right}"
    );
}

#[test]
fn add_laws_exhaustive_over_tags() {
    let reps = [Finite(3.5), Finite(-2.0), PosInf, NegInf];
    for &a in &reps {
        for &b in &reps {
            for &c in &reps {
                add_laws_hold(a, b, c);
            }
        }
    }
}

proptest! {
    #[test]
    fn add_commutative_associative(a in scalar(), b in scalar(), c in scalar()) {
        add_laws_hold(a, b, c);
    }

    #[test]
    fn scale_distributes_over_add(p in 0.0..100.0f64, a in scalar(), b in scalar()) {
        // The law is only claimed when no (+inf, -inf) pair forms on
        // either side; with p > 0 the pairs coincide, and p = 0 collapses
        // everything to 0.
        let mixed = matches!((a, b), (PosInf, NegInf) | (NegInf, PosInf));
        prop_assume!(!mixed);
        let left = (a + b).scale(p);
        let right = a.scale(p) + b.scale(p);
        prop_assert!(
            left.approx_eq(right, TOL * (1.0 + p)),
            "{p} * ({a} + {b}) = {left} but split form gives {right}"
        );
    }

    #[test]
    fn pointwise_order_is_a_partial_order(
        a in finite_vec(4),
        b in finite_vec(4),
        c in finite_vec(4),
    ) {
        prop_assert!(a.le(&a));
        if a.le(&b) && b.le(&a) {
            prop_assert_eq!(&a, &b);
        }
        if a.le(&b) && b.le(&c) {
            prop_assert!(a.le(&c));
        }
    }

    #[test]
    fn weighted_sup_distance_is_a_metric(
        a in finite_vec(5),
        b in finite_vec(5),
        c in finite_vec(5),
        w in proptest::collection::vec(0.1..10.0f64, 5),
    ) {
        let v = WeightedNorm::new(w);
        let dab = weighted_sup_distance(&a, &b, &v).unwrap_finite();
        let dba = weighted_sup_distance(&b, &a, &v).unwrap_finite();
        prop_assert_eq!(dab, dba);
        prop_assert_eq!(weighted_sup_distance(&a, &a, &v), Finite(0.0));
        if dab == 0.0 {
            prop_assert!(a.approx_eq(&b, 0.0));
        }
        let dac = weighted_sup_distance(&a, &c, &v).unwrap_finite();
        let dbc = weighted_sup_distance(&b, &c, &v).unwrap_finite();
        prop_assert!(dac <= dab + dbc + TOL);
    }
}
