//! Can policy iteration be kept inside the certified-regular policies?
//!
//! The weak form asks for one improvement sequence that never leaves
//! them; the strong form asks for structural conditions under which no
//! improvement step can leave them.

use std::collections::HashMap;

use abstract_model::{
    policy_cost_from, CostCertificate, EventuallyStationaryPolicy, FiniteModel,
    PolicyCostOptions, StationaryPolicy,
};
use extreal_core::ExtendedReal;

use crate::certify::{classify_policies, PolicyRecord, RegularityVerdict};
use crate::chain::{deterministic_chain, positive_cycle_reachable};
use crate::error::RegularityError;
use crate::region::{RegularityOptions, SRegionDescriptor, SRegionKind};

/// Outcome of the weak check: whether some improvement orbit stays
/// regular forever, and the orbit that shows it.
#[derive(Clone, Debug)]
pub struct WeakPiReport {
    pub holds: bool,
    /// Policies visited from the witnessing start until the orbit
    /// first revisits one of them; absent when the property fails.
    pub witness: Option<Vec<StationaryPolicy>>,
}

/// Searches for an improvement sequence consisting entirely of
/// certified-regular policies.
///
/// Successors are canonical: from `μ` the next policy is the greedy
/// minimizer of the Bellman operator at `J_μ`, with exact ties resolved
/// to the lowest control id — the same discipline the operator itself
/// uses. Each certified-regular start is followed until its orbit
/// either leaves the certified set (dead end) or revisits a policy
/// (an infinite all-regular continuation exists).
pub fn check_weak_pi_property(
    model: &FiniteModel,
    region: &SRegionDescriptor,
    options: &RegularityOptions,
) -> Result<WeakPiReport, RegularityError> {
    let records = classify_policies(model, region, options)?;
    let index: HashMap<&StationaryPolicy, usize> = records
        .iter()
        .enumerate()
        .map(|(i, r)| (&r.policy, i))
        .collect();

    for start in 0..records.len() {
        if records[start].verdict != RegularityVerdict::Certified {
            continue;
        }
        let mut orbit: Vec<usize> = Vec::new();
        let mut seen: HashMap<usize, ()> = HashMap::new();
        let mut cur = start;
        loop {
            if records[cur].verdict != RegularityVerdict::Certified {
                break;
            }
            if seen.contains_key(&cur) {
                let witness = orbit
                    .iter()
                    .map(|&i| records[i].policy.clone())
                    .collect();
                return Ok(WeakPiReport {
                    holds: true,
                    witness: Some(witness),
                });
            }
            seen.insert(cur, ());
            orbit.push(cur);
            let (_, greedy) = model.apply_t(&records[cur].eval.cost);
            cur = *index
                .get(&greedy)
                .expect("greedy policy is a feasible selection, hence enumerated");
        }
    }
    Ok(WeakPiReport {
        holds: false,
        witness: None,
    })
}

/// The four structural conditions for keeping every improvement step
/// regular, evaluated on the finite model.
#[derive(Clone, Debug)]
pub struct StrongPiReport {
    /// (1) Members of the region are finite above. Checked on the probe
    /// set, except that the nonnegative-extended kind fails outright
    /// because `+∞` belongs to it.
    pub members_finite_above: bool,
    /// (2) At least one certified-regular policy exists.
    pub regular_policy_exists: bool,
    /// (3) Greedy minima are attained. Control sets here are finite and
    /// nonempty, so this always holds.
    pub greedy_minima_attained: bool,
    /// (4) Every refuted policy's iterates blow up to `+∞` at some
    /// state from every probe.
    pub irregular_policies_diverge: bool,
    /// Policies whose verdict stayed `Unknown`; a nonzero count blocks
    /// the overall conclusion.
    pub unclassified_policies: usize,
    pub holds: bool,
}

/// Evaluates the four conditions. Divergence of a refuted policy is
/// decided exactly for undiscounted deterministic chains (some state
/// reaches a positive-cost cycle, so k-step costs grow without bound
/// from any finite start) and numerically otherwise, via the monotone
/// drift certificate with the supplied blow-up bound. Discounted
/// chains with finite probes cannot blow up, so they fail the
/// condition outright.
pub fn check_strong_pi_conditions(
    model: &FiniteModel,
    region: &SRegionDescriptor,
    blowup_bound: f64,
    options: &RegularityOptions,
) -> Result<StrongPiReport, RegularityError> {
    let records = classify_policies(model, region, options)?;

    let members_finite_above = match region.kind() {
        SRegionKind::NonnegExtended => false,
        _ => region
            .probes()
            .iter()
            .all(|p| p.iter().all(|v| v < ExtendedReal::PosInf)),
    };

    let regular_policy_exists = records
        .iter()
        .any(|r| r.verdict == RegularityVerdict::Certified);

    let greedy_minima_attained = true;

    let mut irregular_policies_diverge = true;
    for record in &records {
        if record.verdict != RegularityVerdict::Refuted {
            continue;
        }
        if !diverges_from_every_probe(model, record, region, blowup_bound, options) {
            irregular_policies_diverge = false;
            break;
        }
    }

    let unclassified_policies = records
        .iter()
        .filter(|r| r.verdict == RegularityVerdict::Unknown)
        .count();

    let holds = members_finite_above
        && regular_policy_exists
        && greedy_minima_attained
        && irregular_policies_diverge
        && unclassified_policies == 0;

    Ok(StrongPiReport {
        members_finite_above,
        regular_policy_exists,
        greedy_minima_attained,
        irregular_policies_diverge,
        unclassified_policies,
        holds,
    })
}

fn diverges_from_every_probe(
    model: &FiniteModel,
    record: &PolicyRecord,
    region: &SRegionDescriptor,
    blowup_bound: f64,
    options: &RegularityOptions,
) -> bool {
    if let Some(chain) = deterministic_chain(model, &record.policy) {
        if model.alpha() == 1.0 {
            return positive_cycle_reachable(&chain);
        }
    }
    if model.alpha() < 1.0 {
        // Discounted iterates of finite probes stay bounded.
        return false;
    }
    let probe_options = PolicyCostOptions {
        horizon_cap: options.horizon_cap,
        tol: options.tol,
        blowup_bound,
        ..options.cost.clone()
    };
    let stationary = EventuallyStationaryPolicy::stationary(record.policy.clone());
    region.probes().iter().all(|probe| {
        let run = policy_cost_from(model, &stationary, probe, &probe_options);
        run.certificates
            .iter()
            .any(|&c| c == CostCertificate::DivergedPlus)
    })
}
