//! Brute-force ground truth: evaluate everything, take minima.

use std::fmt::Write as _;

use abstract_model::{FiniteModel, StationaryPolicy};
use extreal_core::{CostFunction, ExtendedReal};
use regularity::{
    build_regularity_report, RegularityOptions, RegularityReport, RegularityVerdict,
    SRegionDescriptor,
};

use crate::error::OracleError;
use crate::linear::exact_policy_cost;

/// Everything the brute-force sweep learns about a model.
///
/// `j_star` is the componentwise minimum over the whole policy table,
/// `j_star_s` the minimum over the certified-regular policies only, so
/// `j_star ≤ j_star_s` by construction. The table pairs every
/// stationary policy with its best available cost, in enumeration
/// order, aligned with `classifications.records`.
#[derive(Clone, Debug)]
pub struct OracleResult {
    pub j_star: CostFunction,
    pub j_star_s: CostFunction,
    pub policy_costs: Vec<(StationaryPolicy, CostFunction)>,
    pub classifications: RegularityReport,
}

/// Evaluates every stationary policy — exact linear solve where the
/// system characterizes the cost (discounted, or undiscounted and
/// proper), certified iteration otherwise — classifies regularity
/// against the region, and returns the minima plus the full table.
///
/// Evaluations are independent of each other; this build runs them in
/// enumeration order so the table and both minima are deterministic.
pub fn brute_force_optima(
    model: &FiniteModel,
    region: &SRegionDescriptor,
    limit: u128,
    options: &RegularityOptions,
) -> Result<OracleResult, OracleError> {
    let count = model.policy_count();
    if count > limit {
        return Err(OracleError::TooManyPolicies { count, limit });
    }
    let mut options = options.clone();
    options.enumeration_limit = limit;
    let classifications = build_regularity_report(model, region, &options)?;

    let has_stop = !model.stop_set().is_empty();
    let n = model.n_states();
    let mut policy_costs = Vec::with_capacity(classifications.records.len());
    let mut j_star = CostFunction::constant(n, ExtendedReal::PosInf);
    let mut j_star_s = CostFunction::constant(n, ExtendedReal::PosInf);
    for record in &classifications.records {
        let solvable =
            model.alpha() < 1.0 || (has_stop && record.proper == Some(true));
        let cost = if solvable {
            exact_policy_cost(model, &record.policy)?
        } else {
            record.eval.cost.clone()
        };
        for x in 0..n {
            if cost[x] < j_star[x] {
                j_star.set(x, cost[x]);
            }
            if record.verdict == RegularityVerdict::Certified && cost[x] < j_star_s[x] {
                j_star_s.set(x, cost[x]);
            }
        }
        policy_costs.push((record.policy.clone(), cost));
    }

    Ok(OracleResult {
        j_star,
        j_star_s,
        policy_costs,
        classifications,
    })
}

impl OracleResult {
    /// The policy table as CSV: one row per policy in enumeration
    /// order, with its verdict, properness (blank when the model has no
    /// stop set), and per-state costs. Infinities print as `+inf` and
    /// `-inf`.
    pub fn policy_table_csv(&self) -> String {
        let n = self.j_star.len();
        let mut out = String::from("policy,verdict,proper");
        for x in 0..n {
            write!(out, ",j_{x}").unwrap();
        }
        out.push('\n');
        for ((policy, cost), record) in self.policy_costs.iter().zip(&self.classifications.records)
        {
            let ids: Vec<String> = policy.controls().iter().map(usize::to_string).collect();
            write!(out, "{},{}", ids.join("-"), record.verdict).unwrap();
            match record.proper {
                Some(p) => write!(out, ",{p}").unwrap(),
                None => out.push(','),
            }
            for x in 0..n {
                write!(out, ",{}", cost[x]).unwrap();
            }
            out.push('\n');
        }
        out
    }
}
