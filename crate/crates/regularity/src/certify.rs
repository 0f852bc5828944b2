//! Three-valued regularity certification and whole-model policy
//! classification.
//!
//! A policy is regular relative to a region when its cost function lies
//! in the region, is a fixed point of the policy's operator, and
//! attracts the operator's iterates from everywhere in the region. The
//! last clause is checked against the region's finite probe set, so
//! `Certified` is always sampler-relative; `Refuted` means some clause
//! provably failed; `Unknown` means an evaluation ran out of horizon
//! before settling or diverging.

use abstract_model::{
    policy_cost, policy_cost_from, CostCertificate, EventuallyStationaryPolicy, FiniteModel,
    PolicyCostOptions, PolicyCostResult, StationaryPolicy,
};
use extreal_core::{CostFunction, ExtendedReal};

use crate::chain::classify_proper;
use crate::error::RegularityError;
use crate::region::{RegularityOptions, SRegionDescriptor};

/// Outcome of a regularity check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RegularityVerdict {
    /// All three clauses held, relative to the region's probe set.
    Certified,
    /// Some clause provably failed: the cost left the region, missed
    /// the fixed-point equation, or a probe settled elsewhere.
    Refuted,
    /// At least one evaluation was inconclusive within the horizon.
    Unknown,
}

impl std::fmt::Display for RegularityVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            RegularityVerdict::Certified => "certified",
            RegularityVerdict::Refuted => "refuted",
            RegularityVerdict::Unknown => "unknown",
        };
        f.write_str(s)
    }
}

/// One policy's classification inside a whole-model sweep.
#[derive(Clone, Debug)]
pub struct PolicyRecord {
    pub policy: StationaryPolicy,
    pub verdict: RegularityVerdict,
    /// The certified limsup evaluation of the policy's cost.
    pub eval: PolicyCostResult,
    /// Stop-set reachability; `None` when the model has no stop set.
    pub proper: Option<bool>,
}

/// Certifies one policy against the region.
pub fn certify_s_regular(
    model: &FiniteModel,
    mu: &StationaryPolicy,
    region: &SRegionDescriptor,
    options: &RegularityOptions,
) -> Result<RegularityVerdict, RegularityError> {
    model.validate_policy(mu)?;
    let eval = policy_cost(
        model,
        &EventuallyStationaryPolicy::stationary(mu.clone()),
        &options.cost,
    );
    certify_with_eval(model, mu, &eval, region, options)
}

/// The three clauses, given an already-computed cost evaluation.
pub(crate) fn certify_with_eval(
    model: &FiniteModel,
    mu: &StationaryPolicy,
    eval: &PolicyCostResult,
    region: &SRegionDescriptor,
    options: &RegularityOptions,
) -> Result<RegularityVerdict, RegularityError> {
    // An unsettled cost evaluation poisons every later clause: both
    // oscillation estimates and horizon exhaustion leave J_μ untrusted.
    if !eval.all_certified() {
        return Ok(RegularityVerdict::Unknown);
    }
    let j_mu = &eval.cost;

    if !region.contains(model, j_mu, options)? {
        return Ok(RegularityVerdict::Refuted);
    }

    let residual = model.apply_tmu(mu, j_mu).sup_distance(j_mu);
    if residual > ExtendedReal::new(options.tol) {
        return Ok(RegularityVerdict::Refuted);
    }

    let probe_options = PolicyCostOptions {
        horizon_cap: options.horizon_cap,
        tol: options.tol,
        ..options.cost.clone()
    };
    let stationary = EventuallyStationaryPolicy::stationary(mu.clone());
    let mut inconclusive = false;
    for probe in region.probes() {
        let run = policy_cost_from(model, &stationary, probe, &probe_options);
        for x in 0..model.n_states() {
            match run.certificates[x] {
                CostCertificate::Settled
                | CostCertificate::DivergedPlus
                | CostCertificate::DivergedMinus => {
                    if run.cost[x].abs_diff(j_mu[x]) > ExtendedReal::new(options.mismatch_tol) {
                        // The probe's certified limit is somewhere else.
                        return Ok(RegularityVerdict::Refuted);
                    }
                }
                CostCertificate::Oscillating | CostCertificate::Uncertified => {
                    inconclusive = true;
                }
            }
        }
    }
    if inconclusive {
        Ok(RegularityVerdict::Unknown)
    } else {
        Ok(RegularityVerdict::Certified)
    }
}

/// Classifies every stationary policy of the model: cost evaluation,
/// regularity verdict, and properness when a stop set exists.
///
/// The sweep is a single-threaded build; the returned records are
/// immutable and safe to share across threads afterwards.
pub fn classify_policies(
    model: &FiniteModel,
    region: &SRegionDescriptor,
    options: &RegularityOptions,
) -> Result<Vec<PolicyRecord>, RegularityError> {
    let has_stop = !model.stop_set().is_empty();
    let mut records = Vec::new();
    for mu in model.enumerate_policies(options.enumeration_limit)? {
        let eval = policy_cost(
            model,
            &EventuallyStationaryPolicy::stationary(mu.clone()),
            &options.cost,
        );
        let verdict = certify_with_eval(model, &mu, &eval, region, options)?;
        let proper = if has_stop {
            Some(classify_proper(model, &mu)?)
        } else {
            None
        };
        records.push(PolicyRecord {
            policy: mu,
            verdict,
            eval,
            proper,
        });
    }
    Ok(records)
}

/// Componentwise minimum of `J_μ` over the certified-regular policies;
/// `+∞` everywhere when there are none (the infimum over an empty set).
pub fn opt_over_regular(
    model: &FiniteModel,
    region: &SRegionDescriptor,
    options: &RegularityOptions,
) -> Result<CostFunction, RegularityError> {
    let records = classify_policies(model, region, options)?;
    Ok(opt_from_records(model.n_states(), &records))
}

/// The same minimum, reusing an existing classification sweep.
pub fn opt_from_records(n_states: usize, records: &[PolicyRecord]) -> CostFunction {
    let mut best = CostFunction::constant(n_states, ExtendedReal::PosInf);
    for record in records {
        if record.verdict != RegularityVerdict::Certified {
            continue;
        }
        for x in 0..n_states {
            if record.eval.cost[x] < best[x] {
                best.set(x, record.eval.cost[x]);
            }
        }
    }
    best
}
