//! Per-method behavior on the two-state workbench model, handmade
//! cycles, and seeded random instances: the documented convergence,
//! stall, oscillation, and divergence cases of each solver.

use abstract_model::{Control, FiniteModel, PolicyCostOptions, StationaryPolicy};
use extreal_core::{CostFunction, ExtendedReal, WeightedNorm};
use models::{
    build_detsp, build_discounted, build_random_ssp, detsp_exit_policy, detsp_loop_policy,
    DetSpParams, DETSP_WORK,
};
use regularity::{RegularityOptions, SRegionDescriptor, SRegionKind};
use solvers::*;

use ExtendedReal::Finite;

fn detsp(a: f64, b: f64) -> FiniteModel {
    build_detsp(DetSpParams { a, b })
}

/// Horizons tuned so drift certifies against the small blow-up bound
/// well inside the cap.
fn opts() -> RegularityOptions {
    RegularityOptions {
        horizon_cap: 20_000,
        cost: PolicyCostOptions {
            horizon_cap: 50_000,
            blowup_bound: 1e4,
            ..PolicyCostOptions::default()
        },
        ..RegularityOptions::default()
    }
}

fn all_real(model: &FiniteModel) -> SRegionDescriptor {
    SRegionDescriptor::with_default_sampler(SRegionKind::AllReal, model, 7, &opts()).unwrap()
}

fn reals(values: &[f64]) -> CostFunction {
    CostFunction::from_reals(values)
}

fn at(j: &CostFunction, x: usize) -> f64 {
    j[x].unwrap_finite()
}

/// Two states passing a zero-cost token back and forth; no stop set.
fn zero_swap() -> FiniteModel {
    FiniteModel::new(
        vec![
            vec![Control::new(0, 0.0, vec![(1.0, 1)])],
            vec![Control::new(0, 0.0, vec![(1.0, 0)])],
        ],
        1.0,
        CostFunction::zeros(2),
        [],
    )
    .unwrap()
}

/// Two states cycling at unit cost; every policy is doomed.
fn endless_cycle() -> FiniteModel {
    FiniteModel::new(
        vec![
            vec![Control::new(0, 1.0, vec![(1.0, 1)])],
            vec![Control::new(0, 1.0, vec![(1.0, 0)])],
        ],
        1.0,
        CostFunction::zeros(2),
        [],
    )
    .unwrap()
}

// ---------------------------------------------------------------- VI

#[test]
fn vi_settles_in_two_applications_from_above_the_exit_cost() {
    let m = detsp(0.0, 3.0);
    let trace = value_iteration(&m, &reals(&[5.0, 0.0]), 1e-9, 1000);
    match &trace.outcome {
        SolveOutcome::Converged(j) => assert!(j.approx_eq(&reals(&[3.0, 0.0]), 1e-12)),
        other => panic!("expected convergence, got {other:?}"),
    }
    assert_eq!(trace.iterations, 2);
    assert_eq!(trace.iterates.len(), 2);
    assert_eq!(trace.residuals, vec![Finite(2.0), Finite(0.0)]);
}

#[test]
fn vi_stops_at_whatever_fixed_point_it_starts_on() {
    let m = detsp(0.0, 3.0);
    let trace = value_iteration(&m, &reals(&[1.0, 0.0]), 1e-9, 1000);
    match &trace.outcome {
        SolveOutcome::Stalled(j) => assert!(j.approx_eq(&reals(&[1.0, 0.0]), 1e-12)),
        other => panic!("expected a stall, got {other:?}"),
    }
    assert_eq!(trace.iterations, 1);
    // Distinguishable from budget exhaustion: the recorded residual is
    // within tolerance.
    assert_eq!(*trace.residuals.last().unwrap(), Finite(0.0));
}

#[test]
fn vi_climbs_the_closed_form_ramp_to_the_exit_cost() {
    let m = detsp(1.0, 5.0);
    let trace = value_iteration(&m, &reals(&[0.0, 0.0]), 1e-9, 1000);
    // Closed form: k applications take the work state to min(5, k).
    for (k, j) in trace.iterates.iter().enumerate() {
        assert_eq!(at(j, DETSP_WORK), (k as f64).min(5.0), "iterate {k}");
    }
    match &trace.outcome {
        SolveOutcome::Converged(j) => assert_eq!(at(j, DETSP_WORK), 5.0),
        other => panic!("expected convergence, got {other:?}"),
    }
    // First attained at iterate 5; one more application certifies it.
    assert_eq!(trace.iterations, 6);
}

#[test]
fn vi_certifies_sustained_downward_drift() {
    let m = detsp(-1.0, 5.0);
    let options = ViOptions {
        blowup_bound: 1e3,
        ..ViOptions::default()
    };
    let trace = value_iteration_with(&m, &reals(&[0.0, 0.0]), 1e-9, 100_000, &options);
    assert_eq!(trace.outcome, SolveOutcome::Diverged(vec![DETSP_WORK]));
}

#[test]
fn vi_reports_exact_period_two_cycles_with_their_policies() {
    let m = zero_swap();
    let trace = value_iteration(&m, &reals(&[1.0, 0.0]), 1e-9, 1000);
    match &trace.outcome {
        SolveOutcome::Oscillating(cycle) => assert_eq!(cycle.len(), 2),
        other => panic!("expected oscillation, got {other:?}"),
    }
    assert_eq!(trace.iterations, 2);
}

#[test]
fn vi_budget_exhaustion_reads_as_stall_with_live_residual() {
    let m = detsp(1.0, 5.0);
    let trace = value_iteration(&m, &reals(&[0.0, 0.0]), 1e-9, 3);
    match &trace.outcome {
        SolveOutcome::Stalled(j) => assert_eq!(at(j, DETSP_WORK), 3.0),
        other => panic!("expected a stall, got {other:?}"),
    }
    assert_eq!(trace.iterations, 3);
    assert!(*trace.residuals.last().unwrap() > Finite(1e-9));
}

#[test]
fn vi_trace_serializations_carry_the_run() {
    let m = detsp(0.0, 3.0);
    let trace = value_iteration(&m, &reals(&[5.0, 0.0]), 1e-9, 1000);
    let csv = trace.csv();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("iteration,j_0,j_1,residual"));
    assert_eq!(lines.next(), Some("0,5,0,2"));
    assert_eq!(lines.next(), Some("1,3,0,0"));
    assert_eq!(lines.next(), None);
    let summary = trace.json_summary();
    let parsed: serde_json::Value = serde_json::from_str(&summary).unwrap();
    assert_eq!(parsed["outcome"], "converged");
    assert_eq!(parsed["iterations"], 2);
    assert_eq!(parsed["final"][0], "3");
}

// ------------------------------------------------------ region check

#[test]
fn region_check_sees_one_sided_convergence_on_the_stall_regime() {
    let m = detsp(0.0, 3.0);
    let report = vi_region_check(&m, &all_real(&m), 12, 3, &opts()).unwrap();
    assert!(report.inside_all_converged);
    assert!(report.target.approx_eq(&reals(&[3.0, 0.0]), 1e-6));
    let outside: Vec<_> = report.probes.iter().filter(|p| !p.inside).collect();
    assert_eq!(outside.len(), 12);
    for probe in outside {
        // Every function below the exit cost is itself a fixed point
        // here, so the outside runs stay exactly where they started.
        match &probe.outcome {
            SolveOutcome::Stalled(j) => {
                assert!(j.approx_eq(&probe.start, 1e-12));
            }
            other => panic!("expected outside stall, got {other:?}"),
        }
        assert!(probe.gap_to_optimum.unwrap() > Finite(1e-3));
    }
}

#[test]
fn region_check_converges_from_both_sides_on_the_climb_regime() {
    let m = detsp(1.0, 5.0);
    let report = vi_region_check(&m, &all_real(&m), 10, 11, &opts()).unwrap();
    assert!(report.inside_all_converged);
    // Outside starts are below the optimum, and on this model they
    // converge anyway; the check records that without asserting it.
    for probe in report.probes.iter().filter(|p| !p.inside) {
        assert!(probe.gap_to_optimum.unwrap() <= Finite(1e-6));
    }
}

#[test]
fn region_check_needs_a_finite_lower_boundary() {
    let m = endless_cycle();
    let err = vi_region_check(&m, &all_real(&m), 4, 0, &opts()).unwrap_err();
    assert!(matches!(err, SolverError::NonFiniteBoundary { .. }));
}

// ---------------------------------------------------------------- PI

#[test]
fn pi_keep_current_stalls_at_the_exit_policy() {
    let m = detsp(0.0, 3.0);
    let trace = policy_iteration(
        &m,
        &detsp_exit_policy(),
        TieBreakRule::KeepCurrentIfTied,
        &PolicyEvalMode::ExactLinearSolve,
        100,
    )
    .unwrap();
    // The exit evaluation is a fixed point of the improvement step, so
    // the run converges there even though the loop policy is strictly
    // better (cost 0).
    match &trace.outcome {
        SolveOutcome::Converged(j) => assert!(j.approx_eq(&reals(&[3.0, 0.0]), 1e-9)),
        other => panic!("expected stall-as-convergence, got {other:?}"),
    }
    assert_eq!(trace.iterations, 1);
    assert_eq!(trace.policies, vec![detsp_exit_policy()]);
}

#[test]
fn pi_always_switch_oscillates_between_the_tied_pair() {
    let m = detsp(0.0, -2.0);
    let trace = policy_iteration(
        &m,
        &detsp_exit_policy(),
        TieBreakRule::AlwaysSwitchIfTied,
        &PolicyEvalMode::default(),
        100,
    )
    .unwrap();
    match &trace.outcome {
        SolveOutcome::Oscillating(cycle) => {
            assert_eq!(cycle, &vec![detsp_exit_policy(), detsp_loop_policy()]);
        }
        other => panic!("expected oscillation, got {other:?}"),
    }
    assert_eq!(trace.iterations, 2);
}

#[test]
fn pi_exact_evaluation_rejects_improper_policies() {
    let m = detsp(0.0, -2.0);
    let err = policy_iteration(
        &m,
        &detsp_loop_policy(),
        TieBreakRule::KeepCurrentIfTied,
        &PolicyEvalMode::ExactLinearSolve,
        100,
    )
    .unwrap_err();
    assert!(matches!(err, SolverError::ImproperPolicyEvaluation { .. }));
}

#[test]
fn pi_iterative_evaluation_improves_away_from_an_improper_start() {
    let m = detsp(1.0, 5.0);
    let eval = PolicyEvalMode::IterativeWithCap(PolicyCostOptions {
        horizon_cap: 50_000,
        blowup_bound: 1e4,
        ..PolicyCostOptions::default()
    });
    let trace = policy_iteration(
        &m,
        &detsp_loop_policy(),
        TieBreakRule::KeepCurrentIfTied,
        &eval,
        100,
    )
    .unwrap();
    // The loop evaluation comes back +inf at the work state; the
    // improvement step compares in extended arithmetic and escapes.
    assert_eq!(trace.iterates[0][DETSP_WORK], ExtendedReal::PosInf);
    match &trace.outcome {
        SolveOutcome::Converged(j) => assert!(j.approx_eq(&reals(&[5.0, 0.0]), 1e-6)),
        other => panic!("expected convergence, got {other:?}"),
    }
    assert_eq!(trace.iterations, 2);
}

#[test]
fn pi_lowest_id_matches_brute_force_on_proper_instances() {
    for seed in 0..15 {
        let m = build_random_ssp(5, 3, (0.5, 2.0), 0.25, seed).unwrap();
        let reference = oracle::brute_force_optima(&m, &all_real(&m), 1_000_000, &opts())
            .unwrap()
            .j_star;
        let mu0 = StationaryPolicy::new_unchecked(vec![0; 5]);
        let trace = policy_iteration(
            &m,
            &mu0,
            TieBreakRule::LowestControlId,
            &PolicyEvalMode::ExactLinearSolve,
            200,
        )
        .unwrap();
        let j = trace.converged_value().expect("proper PI converges");
        assert!(
            j.approx_eq(&reference, 1e-7),
            "seed {seed}: PI {j:?} vs oracle {reference:?}"
        );
    }
}

#[test]
fn pi_reports_budget_exhaustion_as_stall() {
    let m = detsp(1.0, 5.0);
    let eval = PolicyEvalMode::IterativeWithCap(PolicyCostOptions {
        horizon_cap: 50_000,
        blowup_bound: 1e4,
        ..PolicyCostOptions::default()
    });
    let trace = policy_iteration(
        &m,
        &detsp_loop_policy(),
        TieBreakRule::KeepCurrentIfTied,
        &eval,
        1,
    )
    .unwrap();
    assert!(matches!(trace.outcome, SolveOutcome::Stalled(_)));
    assert_eq!(trace.iterations, 1);
}

// --------------------------------------------------------------- OPI

#[test]
fn opi_holds_still_at_an_interior_fixed_point() {
    let m = detsp(0.0, 3.0);
    let trace = optimistic_pi(&m, &reals(&[1.0, 0.0]), &[5], 1e-9, 100).unwrap();
    match &trace.outcome {
        SolveOutcome::Converged(j) => assert!(j.approx_eq(&reals(&[1.0, 0.0]), 1e-12)),
        other => panic!("expected convergence, got {other:?}"),
    }
    assert_eq!(trace.iterates.len(), 1);
    assert_eq!(trace.iterations, 1);
}

#[test]
fn opi_descends_from_above_with_a_short_inner_schedule() {
    let m = detsp(1.0, 5.0);
    let trace = optimistic_pi(&m, &reals(&[10.0, 0.0]), &[3], 1e-9, 100).unwrap();
    match &trace.outcome {
        SolveOutcome::Converged(j) => assert!(j.approx_eq(&reals(&[5.0, 0.0]), 1e-9)),
        other => panic!("expected convergence, got {other:?}"),
    }
}

#[test]
fn opi_rejects_starts_below_their_one_step_image() {
    let m = detsp(1.0, 5.0);
    let err = optimistic_pi(&m, &reals(&[0.0, 0.0]), &[5], 1e-9, 100).unwrap_err();
    assert!(matches!(err, SolverError::NotAboveOperator { state: 0 }));
}

#[test]
fn opi_rejects_degenerate_schedules() {
    let m = detsp(1.0, 5.0);
    let j0 = reals(&[10.0, 0.0]);
    assert!(matches!(
        optimistic_pi(&m, &j0, &[], 1e-9, 100),
        Err(SolverError::BadSchedule)
    ));
    assert!(matches!(
        optimistic_pi(&m, &j0, &[3, 0], 1e-9, 100),
        Err(SolverError::BadSchedule)
    ));
}

#[test]
fn opi_schedule_tail_repeats_its_last_entry() {
    let m = detsp(1.0, 5.0);
    // Schedule [1] forces one application per round: the ramp needs
    // several rounds, exercising the repeat-last rule.
    let trace = optimistic_pi(&m, &reals(&[20.0, 0.0]), &[1], 1e-9, 100).unwrap();
    match &trace.outcome {
        SolveOutcome::Converged(j) => assert!(j.approx_eq(&reals(&[5.0, 0.0]), 1e-9)),
        other => panic!("expected convergence, got {other:?}"),
    }
}

// ------------------------------------------------------ perturbation

#[test]
fn perturbation_shifts_the_exit_cost_by_delta() {
    let m = detsp(0.0, 3.0);
    let schedule = PerturbationSchedule::new(vec![0.1]).unwrap();
    let outcome = perturbation_solve(&m, &schedule, 1e-9).unwrap();
    assert_eq!(outcome.curve.len(), 1);
    let (delta, j) = &outcome.curve[0];
    assert_eq!(*delta, 0.1);
    assert!((at(j, DETSP_WORK) - 3.1).abs() < 1e-7);
    // One point cannot witness affineness.
    assert!(!outcome.affine_extrapolation);
}

#[test]
fn perturbation_curve_extrapolates_to_the_restricted_optimum() {
    let m = detsp(0.0, 3.0);
    let outcome = perturbation_solve(&m, &PerturbationSchedule::default(), 1e-9).unwrap();
    assert!(outcome.affine_extrapolation);
    assert!(
        (at(&outcome.estimate, DETSP_WORK) - 3.0).abs() < 1e-6,
        "estimate {:?}",
        outcome.estimate
    );
    for (delta, j) in &outcome.curve {
        assert!(
            (at(j, DETSP_WORK) - (3.0 + delta)).abs() < 1e-6,
            "delta {delta}"
        );
    }
}

#[test]
fn perturbation_schedules_must_strictly_decrease() {
    assert!(matches!(
        PerturbationSchedule::new(vec![]),
        Err(SolverError::BadSchedule)
    ));
    assert!(matches!(
        PerturbationSchedule::new(vec![0.5, 0.5]),
        Err(SolverError::BadSchedule)
    ));
    assert!(matches!(
        PerturbationSchedule::new(vec![0.5, -0.1]),
        Err(SolverError::BadSchedule)
    ));
    let default = PerturbationSchedule::default();
    assert_eq!(default.deltas().len(), 21);
    assert_eq!(default.deltas()[0], 1.0);
    assert_eq!(*default.deltas().last().unwrap(), 0.5f64.powi(20));
}

#[test]
fn perturbation_surfaces_inner_solver_failure() {
    // At delta = 1 the drift cancels and the solve settles; at
    // delta = 1/2 the perturbed loop still pays -1/2 per stage and
    // value iteration falls without converging.
    let m = detsp(-1.0, 5.0);
    let schedule = PerturbationSchedule::new(vec![1.0, 0.5]).unwrap();
    match perturbation_solve(&m, &schedule, 1e-9) {
        Err(SolverError::InnerSolveFailed { delta }) => assert_eq!(delta, 0.5),
        other => panic!("expected inner failure, got {other:?}"),
    }
}

// ---------------------------------------------------------------- LP

#[test]
fn lp_finds_the_unique_fixed_point_on_the_climb_regime() {
    let m = detsp(1.0, 5.0);
    let sol = lp_solve(&m, &[1.0, 1.0], (-100.0, 100.0)).unwrap();
    assert!((at(&sol.values, DETSP_WORK) - 5.0).abs() < 1e-7);
    assert_eq!(at(&sol.values, 1), 0.0);
    assert!((sol.objective - 5.0).abs() < 1e-7);
    assert!(sol.active_bounds.is_empty());
}

#[test]
fn lp_maximum_picks_the_restricted_optimum_over_the_lower_fixed_points() {
    let m = detsp(0.0, 3.0);
    let sol = lp_solve(&m, &[1.0, 1.0], (-100.0, 100.0)).unwrap();
    // Feasible functions satisfy J <= 3 and J <= 0 + J; the maximum is
    // the restricted optimum 3, not the overall optimum 0.
    assert!((at(&sol.values, DETSP_WORK) - 3.0).abs() < 1e-7);
    assert!(sol.active_bounds.is_empty());
}

#[test]
fn lp_reports_box_activity_on_unbounded_rays() {
    let m = zero_swap();
    let sol = lp_solve(&m, &[1.0, 1.0], (-100.0, 100.0)).unwrap();
    // Constraints force J(0) = J(1) but leave the common value free;
    // the box is what stops the program, and the solution says so.
    assert!((at(&sol.values, 0) - 100.0).abs() < 1e-7);
    assert!((at(&sol.values, 1) - 100.0).abs() < 1e-7);
    assert_eq!(
        sol.active_bounds,
        vec![(0, BoundSide::Upper), (1, BoundSide::Upper)]
    );
}

#[test]
fn lp_detects_a_box_that_excludes_every_feasible_function() {
    let m = detsp(0.0, -2.0);
    // Feasible functions need J(work) <= -2; a nonnegative box admits
    // none of them.
    let err = lp_solve(&m, &[1.0, 1.0], (0.0, 10.0)).unwrap_err();
    assert!(matches!(err, SolverError::Infeasible));
}

#[test]
fn lp_validates_box_and_weights() {
    let m = detsp(1.0, 5.0);
    assert!(matches!(
        lp_solve(&m, &[1.0, 1.0], (3.0, 3.0)),
        Err(SolverError::BadBounds)
    ));
    assert!(matches!(
        lp_solve(&m, &[1.0, 1.0], (f64::NEG_INFINITY, 3.0)),
        Err(SolverError::BadBounds)
    ));
    assert!(matches!(
        lp_solve(&m, &[0.0, 1.0], (-100.0, 100.0)),
        Err(SolverError::BadWeights { state: 0 })
    ));
    // Stop-state weights are ignored; only the work state needs one.
    assert!(lp_solve(&m, &[1.0, 0.0], (-100.0, 100.0)).is_ok());
}

#[test]
fn lp_agrees_with_value_iteration_on_proper_instances() {
    for seed in 0..10 {
        let m = build_random_ssp(5, 3, (0.5, 2.0), 0.25, seed).unwrap();
        let sol = lp_solve(&m, &[1.0; 5], (-100.0, 100.0)).unwrap();
        let trace = value_iteration(&m, &CostFunction::zeros(5), 1e-10, 100_000);
        let j = trace.converged_value().expect("proper VI converges");
        assert!(
            sol.values.approx_eq(j, 1e-7),
            "seed {seed}: LP {:?} vs VI {j:?}",
            sol.values
        );
        assert!(sol.active_bounds.is_empty(), "seed {seed}: box interfered");
    }
}

// -------------------------------------------------------------- rate

#[test]
fn rate_inequalities_hold_on_discounted_instances() {
    for seed in 0..8 {
        let m = build_discounted(5, 3, 0.9, seed).unwrap();
        let trace = value_iteration(&m, &CostFunction::zeros(5), 1e-12, 1_000_000);
        let j_star = trace.converged_value().expect("contraction converges");
        let v = WeightedNorm::uniform(5);
        for c in [0.5, 1.0, 3.0] {
            let j: CostFunction = (0..5).map(|x| j_star[x] + Finite(c)).collect();
            let check = vi_rate_check(&m, &j, j_star, &v, 0.9).unwrap();
            assert!(
                check.contraction.0 <= check.contraction.1 + 1e-9,
                "seed {seed} c {c}: contraction {:?}",
                check.contraction
            );
            assert!(
                check.error_bound.0 <= check.error_bound.1 + 1e-9,
                "seed {seed} c {c}: error bound {:?}",
                check.error_bound
            );
            assert!(!check.modulus_warning, "seed {seed}: alpha bounds the modulus");
        }
    }
}

#[test]
fn rate_check_is_exactly_zero_at_the_optimum() {
    let m = detsp(1.0, 5.0);
    let j_star = reals(&[5.0, 0.0]);
    let v = WeightedNorm::uniform(2);
    let check = vi_rate_check(&m, &j_star, &j_star, &v, 0.5).unwrap();
    assert_eq!(check.contraction, (0.0, 0.0));
    assert_eq!(check.error_bound, (0.0, 0.0));
    // The greedy policy exits immediately: no mass stays off the stop
    // set, so its operator contracts to zero in one step.
    assert_eq!(check.empirical_modulus, 0.0);
    assert!(!check.modulus_warning);
}

#[test]
fn rate_check_enforces_its_preconditions() {
    let m = detsp(1.0, 5.0);
    let j_star = reals(&[5.0, 0.0]);
    let v = WeightedNorm::uniform(2);
    assert!(matches!(
        vi_rate_check(&m, &reals(&[4.9, 0.0]), &j_star, &v, 0.5),
        Err(SolverError::BelowRestrictedOptimum { state: 0 })
    ));
    assert!(matches!(
        vi_rate_check(&m, &j_star, &j_star, &v, 1.0),
        Err(SolverError::BadModulus { .. })
    ));
    assert!(matches!(
        vi_rate_check(&m, &j_star, &j_star, &v, 0.0),
        Err(SolverError::BadModulus { .. })
    ));
}

#[test]
fn rate_check_warns_when_beta_understates_the_measured_modulus() {
    // Greedy at the restricted optimum of the stall regime ties and
    // resolves to the self-loop, whose operator does not contract at
    // all: modulus 1 exceeds any admissible beta.
    let m = detsp(0.0, 3.0);
    let j_star_s = reals(&[3.0, 0.0]);
    let v = WeightedNorm::uniform(2);
    let check = vi_rate_check(&m, &reals(&[4.0, 0.0]), &j_star_s, &v, 0.9).unwrap();
    assert!((check.empirical_modulus - 1.0).abs() < 1e-12);
    assert!(check.modulus_warning);
}

#[test]
fn rate_error_bound_holds_with_hitting_time_weights() {
    for seed in 0..8 {
        let m = build_random_ssp(5, 3, (0.5, 2.0), 0.3, seed).unwrap();
        let reference = oracle::brute_force_optima(&m, &all_real(&m), 1_000_000, &opts()).unwrap();
        let j_star = reference.j_star;
        let (_, mu_star) = m.apply_t(&j_star);

        // Expected steps-to-termination of the greedy policy: its cost
        // in a unit-cost copy of the model.
        let unit = unit_cost_copy(&m);
        let steps = oracle::exact_policy_cost(&unit, &mu_star).unwrap();
        let weights: Vec<f64> = (0..5)
            .map(|x| if m.is_stop(x) { 1.0 } else { at(&steps, x) })
            .collect();
        let v = WeightedNorm::new(weights.clone());
        // One stage always elapses, so the weighted free row sum is
        // (v - 1) / v and the worst state gives the exact modulus.
        let beta = (1..5)
            .map(|x| (weights[x] - 1.0) / weights[x])
            .fold(0.1f64, f64::max);

        for c in [0.0, 1.0, 4.0] {
            let j: CostFunction = (0..5)
                .map(|x| {
                    if m.is_stop(x) {
                        Finite(0.0)
                    } else {
                        j_star[x] + Finite(c)
                    }
                })
                .collect();
            let check = vi_rate_check(&m, &j, &j_star, &v, beta).unwrap();
            assert!(
                !check.modulus_warning,
                "seed {seed}: beta {beta} vs modulus {}",
                check.empirical_modulus
            );
            assert!(
                check.contraction.0 <= check.contraction.1 + 1e-9,
                "seed {seed} c {c}: contraction {:?}",
                check.contraction
            );
            assert!(
                check.error_bound.0 <= check.error_bound.1 + 1e-9,
                "seed {seed} c {c}: error bound {:?}",
                check.error_bound
            );
        }
    }
}

/// Same transitions, unit stage costs off the stop set.
fn unit_cost_copy(model: &FiniteModel) -> FiniteModel {
    let controls = (0..model.n_states())
        .map(|x| {
            model
                .controls(x)
                .iter()
                .map(|c| {
                    let cost = if model.is_stop(x) { 0.0 } else { 1.0 };
                    Control::new(c.id, cost, c.transitions.clone())
                })
                .collect()
        })
        .collect();
    FiniteModel::new(
        controls,
        model.alpha(),
        model.terminal().clone(),
        model.stop_set().iter().copied(),
    )
    .unwrap()
}
