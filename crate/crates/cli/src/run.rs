//! Verb engines: pure functions from a model plus configuration to
//! report values and exit codes, shared by the binary and the tests.

use abstract_model::{FiniteModel, PolicyCostOptions, StationaryPolicy};
use extreal_core::{CostFunction, ExtendedReal};
use regularity::{
    build_regularity_report, check_strong_pi_conditions, check_weak_pi_property,
    fixed_point_scan, opt_from_records, uniform_grid, RegularityOptions, RegularityVerdict,
    SRegionDescriptor, StrongPiReport, WeakPiReport,
};
use serde_json::{json, Value};
use solvers::{
    lp_solve, optimistic_pi, perturbation_solve, policy_iteration, value_iteration_with,
    BoundSide, PerturbationSchedule, PolicyEvalMode, SolveOutcome, SolveTrace, ViOptions,
};

use crate::config::{Algo, EvalChoice, ExperimentConfig};
use crate::error::CliError;
use crate::modelfile::{cost_to_ext, SCHEMA_VERSION};

/// Run completed with a converged value (or the verb finished).
pub const EXIT_CONVERGED: i32 = 0;
/// Runtime failure: unreadable files, violated preconditions.
pub const EXIT_ERROR: i32 = 1;
/// Argument-parsing failure (owned by the argument parser).
pub const EXIT_USAGE: i32 = 2;
/// Budget exhausted, or parked at a fixed point that needed no work.
pub const EXIT_STALLED: i32 = 3;
/// A value or policy cycle was detected.
pub const EXIT_OSCILLATING: i32 = 4;
/// A sustained-drift divergence certificate fired.
pub const EXIT_DIVERGED: i32 = 5;

/// The documented exit-code table: a total function of the outcome.
pub fn exit_code_for(outcome: &SolveOutcome) -> i32 {
    match outcome {
        SolveOutcome::Converged(_) => EXIT_CONVERGED,
        SolveOutcome::Stalled(_) => EXIT_STALLED,
        SolveOutcome::Oscillating(_) => EXIT_OSCILLATING,
        SolveOutcome::Diverged(_) => EXIT_DIVERGED,
    }
}

/// Output of one verb: a report to serialize, an optional CSV trace,
/// and the process exit code.
pub struct VerbOutput {
    pub report: Value,
    pub trace_csv: Option<String>,
    pub exit_code: i32,
}

fn wrap(model_hash: &str, config: &ExperimentConfig, result: Value) -> Value {
    json!({
        "schema_version": SCHEMA_VERSION,
        "model_hash": model_hash,
        "config": config,
        "result": result,
    })
}

fn ext_values(j: &CostFunction) -> Value {
    serde_json::to_value(cost_to_ext(j)).expect("extended reals always serialize")
}

fn regularity_options(config: &ExperimentConfig) -> RegularityOptions {
    RegularityOptions {
        horizon_cap: config.horizon_cap,
        tol: config.tol,
        cost: PolicyCostOptions {
            horizon_cap: config.horizon_cap,
            blowup_bound: config.blowup_bound,
            tol: config.tol,
            ..PolicyCostOptions::default()
        },
        ..RegularityOptions::default()
    }
}

fn build_region(
    model: &FiniteModel,
    config: &ExperimentConfig,
) -> Result<SRegionDescriptor, CliError> {
    let options = regularity_options(config);
    let region =
        SRegionDescriptor::with_default_sampler(config.region.into(), model, config.seed, &options)?;
    Ok(region)
}

fn lowest_id_policy(model: &FiniteModel) -> StationaryPolicy {
    let choice = (0..model.n_states())
        .map(|x| {
            model
                .controls(x)
                .iter()
                .map(|c| c.id)
                .min()
                .expect("models have no empty control sets")
        })
        .collect();
    StationaryPolicy::new_unchecked(choice)
}

fn trace_output(
    trace: &SolveTrace,
    model_hash: &str,
    config: &ExperimentConfig,
) -> Result<VerbOutput, CliError> {
    let result: Value = serde_json::from_str(&trace.json_summary())?;
    Ok(VerbOutput {
        report: wrap(model_hash, config, result),
        trace_csv: Some(trace.csv()),
        exit_code: exit_code_for(&trace.outcome),
    })
}

/// Dispatches on `config.algo` and packages the outcome.
pub fn run_solve(
    model: &FiniteModel,
    config: &ExperimentConfig,
    model_hash: &str,
) -> Result<VerbOutput, CliError> {
    match config.algo {
        Algo::Vi => {
            let start = config.start.resolve(model)?;
            let options = ViOptions {
                blowup_bound: config.blowup_bound,
                ..ViOptions::default()
            };
            let trace =
                value_iteration_with(model, &start, config.tol, config.max_iter, &options);
            trace_output(&trace, model_hash, config)
        }
        Algo::Pi => {
            let mu0 = match &config.start_policy {
                Some(ids) => StationaryPolicy::new(model, ids.clone())?,
                None => lowest_id_policy(model),
            };
            let eval = match config.eval_mode {
                EvalChoice::Exact => PolicyEvalMode::ExactLinearSolve,
                EvalChoice::Iterative => PolicyEvalMode::IterativeWithCap(PolicyCostOptions {
                    blowup_bound: config.blowup_bound,
                    tol: config.tol,
                    ..PolicyCostOptions::default()
                }),
            };
            let trace = policy_iteration(
                model,
                &mu0,
                config.tie_break.into(),
                &eval,
                config.max_iter,
            )?;
            trace_output(&trace, model_hash, config)
        }
        Algo::Opi => {
            let start = config.start.resolve(model)?;
            let trace =
                optimistic_pi(model, &start, &config.m_schedule, config.tol, config.max_iter)?;
            trace_output(&trace, model_hash, config)
        }
        Algo::Lp => {
            let n = model.n_states();
            let weights = match &config.lp_weights {
                Some(w) => {
                    if w.len() != n {
                        return Err(CliError::WeightLength {
                            got: w.len(),
                            expected: n,
                        });
                    }
                    w.clone()
                }
                None => vec![1.0; n],
            };
            let solution = lp_solve(model, &weights, (config.lp_lower, config.lp_upper))?;
            let active: Vec<Value> = solution
                .active_bounds
                .iter()
                .map(|(state, side)| {
                    let side = match side {
                        BoundSide::Lower => "lower",
                        BoundSide::Upper => "upper",
                    };
                    json!([state, side])
                })
                .collect();
            let result = json!({
                "outcome": "converged",
                "values": ext_values(&solution.values),
                "objective": solution.objective,
                "active_bounds": active,
            });
            Ok(VerbOutput {
                report: wrap(model_hash, config, result),
                trace_csv: None,
                exit_code: EXIT_CONVERGED,
            })
        }
        Algo::Perturbation => {
            let schedule = PerturbationSchedule::new(config.delta_schedule.clone())?;
            let outcome = perturbation_solve(model, &schedule, config.tol)?;
            let curve: Vec<Value> = outcome
                .curve
                .iter()
                .map(|(delta, j)| json!({"delta": delta, "values": ext_values(j)}))
                .collect();
            let result = json!({
                "outcome": "converged",
                "estimate": ext_values(&outcome.estimate),
                "affine_extrapolation": outcome.affine_extrapolation,
                "curve": curve,
            });
            let mut csv = String::from("delta");
            for x in 0..model.n_states() {
                csv.push_str(&format!(",j_{x}"));
            }
            csv.push('\n');
            for (delta, j) in &outcome.curve {
                csv.push_str(&delta.to_string());
                for x in 0..j.len() {
                    csv.push_str(&format!(",{}", j[x]));
                }
                csv.push('\n');
            }
            Ok(VerbOutput {
                report: wrap(model_hash, config, result),
                trace_csv: Some(csv),
                exit_code: EXIT_CONVERGED,
            })
        }
    }
}

fn verdict_label(verdict: RegularityVerdict) -> &'static str {
    match verdict {
        RegularityVerdict::Certified => "certified",
        RegularityVerdict::Refuted => "refuted",
        RegularityVerdict::Unknown => "unknown",
    }
}

fn weak_pi_json(report: &WeakPiReport) -> Value {
    let witness = report.witness.as_ref().map(|orbit| {
        orbit
            .iter()
            .map(|mu| mu.controls().to_vec())
            .collect::<Vec<_>>()
    });
    json!({"holds": report.holds, "witness": witness})
}

fn strong_pi_json(report: &StrongPiReport) -> Value {
    json!({
        "members_finite_above": report.members_finite_above,
        "regular_policy_exists": report.regular_policy_exists,
        "greedy_minima_attained": report.greedy_minima_attained,
        "irregular_policies_diverge": report.irregular_policies_diverge,
        "unclassified_policies": report.unclassified_policies,
        "holds": report.holds,
    })
}

/// Classifies every stationary policy against the configured region
/// and reports the derived optimum structure plus both PI-property
/// checks.
pub fn run_classify(
    model: &FiniteModel,
    config: &ExperimentConfig,
    model_hash: &str,
) -> Result<VerbOutput, CliError> {
    let options = regularity_options(config);
    let region = build_region(model, config)?;
    let report = build_regularity_report(model, &region, &options)?;
    let j_star_s = opt_from_records(model.n_states(), &report.records);
    let weak = check_weak_pi_property(model, &region, &options)?;
    let strong = check_strong_pi_conditions(model, &region, config.blowup_bound, &options)?;

    let policies: Vec<Value> = report
        .records
        .iter()
        .map(|record| {
            json!({
                "controls": record.policy.controls().to_vec(),
                "verdict": verdict_label(record.verdict),
                "proper": record.proper,
                "cost": ext_values(&record.eval.cost),
            })
        })
        .collect();
    let result = json!({
        "policies": policies,
        "j_star": ext_values(&report.j_star),
        "j_star_s": ext_values(&j_star_s),
        "zero_states": report.zero_states,
        "infinite_states": report.infinite_states,
        "weak_pi": weak_pi_json(&weak),
        "strong_pi": strong_pi_json(&strong),
    });
    Ok(VerbOutput {
        report: wrap(model_hash, config, result),
        trace_csv: None,
        exit_code: EXIT_CONVERGED,
    })
}

/// Sweeps the value grid `lo, lo+step, … , hi` over every non-stop
/// state (stop states pinned to zero), reporting each point's residual
/// and the subset that are fixed points within `config.tol`.
pub fn run_scan(
    model: &FiniteModel,
    config: &ExperimentConfig,
    model_hash: &str,
    lo: f64,
    hi: f64,
    step: f64,
) -> Result<VerbOutput, CliError> {
    if !(lo.is_finite() && hi.is_finite() && step.is_finite() && step > 0.0 && lo <= hi) {
        return Err(CliError::BadGrid);
    }
    let line = uniform_grid(lo, hi, step);
    let grids: Vec<Vec<f64>> = (0..model.n_states())
        .map(|x| {
            if model.is_stop(x) {
                vec![0.0]
            } else {
                line.clone()
            }
        })
        .collect();
    let fixed = fixed_point_scan(model, &grids, config.tol)?;

    let n = model.n_states();
    let mut csv = String::new();
    for x in 0..n {
        csv.push_str(&format!("j_{x},"));
    }
    csv.push_str("residual,fixed\n");
    let tol = ExtendedReal::new(config.tol);
    let mut scanned = 0usize;
    let mut index = vec![0usize; n];
    'sweep: loop {
        let j: CostFunction = index
            .iter()
            .enumerate()
            .map(|(x, &i)| ExtendedReal::new(grids[x][i]))
            .collect();
        let (tj, _) = model.apply_t(&j);
        let residual = tj.sup_distance(&j);
        scanned += 1;
        for x in 0..n {
            csv.push_str(&format!("{},", j[x]));
        }
        csv.push_str(&format!(
            "{},{}\n",
            residual,
            if residual <= tol { 1 } else { 0 }
        ));

        let mut digit = 0;
        loop {
            if digit == n {
                break 'sweep;
            }
            index[digit] += 1;
            if index[digit] < grids[digit].len() {
                break;
            }
            index[digit] = 0;
            digit += 1;
        }
    }

    let result = json!({
        "grid": {"lo": lo, "hi": hi, "step": step},
        "points_scanned": scanned,
        "fixed_points": fixed.iter().map(ext_values).collect::<Vec<_>>(),
    });
    Ok(VerbOutput {
        report: wrap(model_hash, config, result),
        trace_csv: Some(csv),
        exit_code: EXIT_CONVERGED,
    })
}

/// Full brute-force reference dump.
pub fn run_oracle(
    model: &FiniteModel,
    config: &ExperimentConfig,
    model_hash: &str,
    limit: u128,
) -> Result<VerbOutput, CliError> {
    let options = regularity_options(config);
    let region = build_region(model, config)?;
    let reference = oracle::brute_force_optima(model, &region, limit, &options)?;
    let policies: Vec<Value> = reference
        .classifications
        .records
        .iter()
        .map(|record| {
            json!({
                "controls": record.policy.controls().to_vec(),
                "verdict": verdict_label(record.verdict),
                "proper": record.proper,
                "cost": ext_values(&record.eval.cost),
            })
        })
        .collect();
    let result = json!({
        "j_star": ext_values(&reference.j_star),
        "j_star_s": ext_values(&reference.j_star_s),
        "policies": policies,
        "zero_states": reference.classifications.zero_states,
        "infinite_states": reference.classifications.infinite_states,
    });
    Ok(VerbOutput {
        report: wrap(model_hash, config, result),
        trace_csv: None,
        exit_code: EXIT_CONVERGED,
    })
}

/// One-stop reproducibility bundle: the configured solve, the
/// classification report, and the brute-force reference side by side.
pub fn run_report(
    model: &FiniteModel,
    config: &ExperimentConfig,
    model_hash: &str,
    limit: u128,
) -> Result<VerbOutput, CliError> {
    let solve = run_solve(model, config, model_hash)?;
    let classify = run_classify(model, config, model_hash)?;
    let reference = run_oracle(model, config, model_hash, limit)?;
    let result = json!({
        "solve": solve.report["result"],
        "solve_exit_code": solve.exit_code,
        "classify": classify.report["result"],
        "oracle": reference.report["result"],
    });
    Ok(VerbOutput {
        report: wrap(model_hash, config, result),
        trace_csv: solve.trace_csv,
        exit_code: EXIT_CONVERGED,
    })
}
