//! Whole-model classification summary.

use abstract_model::FiniteModel;
use extreal_core::{CostFunction, ExtendedReal};

use crate::certify::{classify_policies, PolicyRecord};
use crate::error::RegularityError;
use crate::region::{RegularityOptions, SRegionDescriptor};

/// Per-policy classification plus the derived structure of the optimal
/// cost: where it vanishes and where it is infinite.
#[derive(Clone, Debug)]
pub struct RegularityReport {
    pub records: Vec<PolicyRecord>,
    /// Componentwise minimum of every policy's evaluated cost — the
    /// unrestricted optimum over stationary policies.
    pub j_star: CostFunction,
    /// States where the optimum is zero (within tolerance).
    pub zero_states: Vec<usize>,
    /// States where the optimum is `+∞`.
    pub infinite_states: Vec<usize>,
}

/// Classifies every policy and derives the optimum's zero and infinite
/// state sets.
pub fn build_regularity_report(
    model: &FiniteModel,
    region: &SRegionDescriptor,
    options: &RegularityOptions,
) -> Result<RegularityReport, RegularityError> {
    let records = classify_policies(model, region, options)?;
    let n = model.n_states();

    let mut j_star = CostFunction::constant(n, ExtendedReal::PosInf);
    for record in &records {
        for x in 0..n {
            if record.eval.cost[x] < j_star[x] {
                j_star.set(x, record.eval.cost[x]);
            }
        }
    }

    let tol = ExtendedReal::new(options.tol);
    let zero = ExtendedReal::new(0.0);
    let zero_states = (0..n)
        .filter(|&x| j_star[x].abs_diff(zero) <= tol)
        .collect();
    let infinite_states = (0..n).filter(|&x| j_star[x] == ExtendedReal::PosInf).collect();

    Ok(RegularityReport {
        records,
        j_star,
        zero_states,
        infinite_states,
    })
}
