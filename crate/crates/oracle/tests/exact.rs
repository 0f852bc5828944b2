//! Exact linear-solve evaluation against closed forms and the
//! iterative estimator.

use abstract_model::{
    policy_cost, Control, EventuallyStationaryPolicy, FiniteModel, PolicyCostOptions,
    StationaryPolicy,
};
use extreal_core::{CostFunction, ExtendedReal};
use models::{build_detsp, build_nonneg_mdp, detsp_exit_policy, detsp_loop_policy, DetSpParams};
use oracle::{exact_policy_cost, OracleError, PolicyEnumeration};

#[test]
fn exit_policy_cost_is_the_exit_price() {
    let m = build_detsp(DetSpParams { a: 1.0, b: 5.0 });
    let j = exact_policy_cost(&m, &detsp_exit_policy()).unwrap();
    assert!(j.approx_eq(&CostFunction::from_reals(&[5.0, 0.0]), 1e-12));
}

#[test]
fn discounted_self_loop_sums_the_geometric_series() {
    let m = FiniteModel::new(
        vec![vec![Control::new(0, 1.0, vec![(1.0, 0)])]],
        0.5,
        CostFunction::zeros(1),
        [],
    )
    .unwrap();
    let j = exact_policy_cost(&m, &StationaryPolicy::new_unchecked(vec![0])).unwrap();
    assert!(j.approx_eq(&CostFunction::from_reals(&[2.0]), 1e-12));
}

#[test]
fn improper_policy_is_rejected_up_front() {
    let m = build_detsp(DetSpParams { a: 1.0, b: 5.0 });
    let err = exact_policy_cost(&m, &detsp_loop_policy());
    assert!(matches!(err, Err(OracleError::ImproperPolicy { .. })));
}

#[test]
fn undiscounted_evaluation_needs_a_stop_set() {
    let m = FiniteModel::new(
        vec![vec![Control::new(0, 1.0, vec![(1.0, 0)])]],
        1.0,
        CostFunction::zeros(1),
        [],
    )
    .unwrap();
    let err = exact_policy_cost(&m, &StationaryPolicy::new_unchecked(vec![0]));
    assert!(matches!(err, Err(OracleError::Regularity(_))));
}

#[test]
fn exact_and_iterative_evaluations_agree_on_proper_policies() {
    let options = PolicyCostOptions::default();
    for seed in 0..20 {
        let m = build_nonneg_mdp(4, 2, seed).unwrap();
        for mu in m.enumerate_policies(1_000_000).unwrap() {
            let exact = exact_policy_cost(&m, &mu).unwrap();

            let residual = m.apply_tmu(&mu, &exact).sup_distance(&exact);
            assert!(
                residual <= ExtendedReal::new(1e-9),
                "seed {seed}, policy {mu}: fixed-point residual {residual}"
            );

            let iterative = policy_cost(
                &m,
                &EventuallyStationaryPolicy::stationary(mu.clone()),
                &options,
            );
            assert!(iterative.all_certified(), "seed {seed}, policy {mu}");
            let gap = exact.sup_distance(&iterative.cost);
            assert!(
                gap <= ExtendedReal::new(1e-7),
                "seed {seed}, policy {mu}: methods disagree by {gap}"
            );
        }
    }
}

#[test]
fn enumeration_streams_each_policy_exactly_once() {
    let m = build_nonneg_mdp(3, 2, 5).unwrap();
    let streamed: Vec<StationaryPolicy> = PolicyEnumeration::new(&m).collect();
    assert_eq!(streamed, m.enumerate_policies(1_000_000).unwrap());
    assert_eq!(streamed.len() as u128, PolicyEnumeration::new(&m).total());
    let distinct: std::collections::HashSet<_> = streamed.iter().collect();
    assert_eq!(distinct.len(), streamed.len());
}

#[test]
fn enumeration_total_multiplies_control_set_sizes() {
    let m = build_detsp(DetSpParams { a: 0.0, b: 3.0 });
    assert_eq!(PolicyEnumeration::new(&m).total(), 2);
    assert_eq!(PolicyEnumeration::new(&m).count(), 2);
}
