//! Divergence certificates for policy iterates started at a given
//! function.

use abstract_model::{
    policy_cost_from, CostCertificate, EventuallyStationaryPolicy, FiniteModel, PolicyCostOptions,
    StationaryPolicy,
};
use extreal_core::{CostFunction, ExtendedReal};
use regularity::deterministic_chain;

use crate::error::OracleError;

/// Cycle costs within this of zero count as cost-neutral.
const CYCLE_TOL: f64 = 1e-12;

/// What happens to the iterates of a policy's operator from `J`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DivergenceCertificate {
    /// The listed states blow up to `+∞`; blow-up upward takes
    /// precedence when both signs occur.
    DivergesPlus(Vec<usize>),
    /// The listed states sink to `-∞` and none blow up.
    DivergesMinus(Vec<usize>),
    /// Every state stays bounded (certified).
    Bounded,
    /// The horizon ran out before any certificate was earned.
    Unknown,
}

/// [`certify_divergence_with`] under default numeric options.
pub fn certify_divergence(
    model: &FiniteModel,
    mu: &StationaryPolicy,
    j: &CostFunction,
) -> Result<DivergenceCertificate, OracleError> {
    certify_divergence_with(model, mu, j, &PolicyCostOptions::default())
}

/// Certifies the long-run behavior of `T_μ^k J` per state.
///
/// Deterministic chains get exact cycle analysis: each state is
/// eventually trapped on one cycle, so under total cost the cycle's
/// cost sign decides divergence, and under discounting only infinite
/// values carried on the cycle itself can diverge. Stochastic chains
/// fall back to iteration with drift certificates, so `Unknown` is
/// possible there; `options` governs that fallback only.
pub fn certify_divergence_with(
    model: &FiniteModel,
    mu: &StationaryPolicy,
    j: &CostFunction,
    options: &PolicyCostOptions,
) -> Result<DivergenceCertificate, OracleError> {
    model.validate_policy(mu)?;
    assert_eq!(j.len(), model.n_states(), "cost function length mismatch");

    if let Some(chain) = deterministic_chain(model, mu) {
        return Ok(exact_cycle_certificate(model, &chain, j));
    }

    let run = policy_cost_from(
        model,
        &EventuallyStationaryPolicy::stationary(mu.clone()),
        j,
        options,
    );
    let mut plus = Vec::new();
    let mut minus = Vec::new();
    let mut unresolved = false;
    for (x, certificate) in run.certificates.iter().enumerate() {
        match certificate {
            CostCertificate::DivergedPlus => plus.push(x),
            CostCertificate::DivergedMinus => minus.push(x),
            CostCertificate::Settled => {}
            CostCertificate::Oscillating | CostCertificate::Uncertified => unresolved = true,
        }
    }
    Ok(aggregate(plus, minus, unresolved))
}

/// Exact per-state classification on a deterministic chain: walk each
/// state onto its trapping cycle and read off the cycle's cost and the
/// infinite values it carries.
fn exact_cycle_certificate(
    model: &FiniteModel,
    chain: &[(usize, f64)],
    j: &CostFunction,
) -> DivergenceCertificate {
    let n = chain.len();
    let undiscounted = model.alpha() >= 1.0;
    let mut plus = Vec::new();
    let mut minus = Vec::new();
    for x in 0..n {
        // After n hops the walk is inside its cycle.
        let mut pos = x;
        for _ in 0..n {
            pos = chain[pos].0;
        }
        let start = pos;
        let mut cycle_cost = chain[start].1;
        let mut plus_on_cycle = j[start] == ExtendedReal::PosInf;
        let mut all_minus = j[start] == ExtendedReal::NegInf;
        let mut q = chain[start].0;
        while q != start {
            cycle_cost += chain[q].1;
            plus_on_cycle |= j[q] == ExtendedReal::PosInf;
            all_minus &= j[q] == ExtendedReal::NegInf;
            q = chain[q].0;
        }

        let growth = if undiscounted { cycle_cost } else { 0.0 };
        if all_minus {
            minus.push(x);
        } else if plus_on_cycle || growth > CYCLE_TOL {
            plus.push(x);
        } else if growth < -CYCLE_TOL {
            minus.push(x);
        }
    }
    aggregate(plus, minus, false)
}

fn aggregate(plus: Vec<usize>, minus: Vec<usize>, unresolved: bool) -> DivergenceCertificate {
    if !plus.is_empty() {
        DivergenceCertificate::DivergesPlus(plus)
    } else if !minus.is_empty() {
        DivergenceCertificate::DivergesMinus(minus)
    } else if unresolved {
        DivergenceCertificate::Unknown
    } else {
        DivergenceCertificate::Bounded
    }
}
