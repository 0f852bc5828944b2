//! The region of cost functions squeezed between the restricted
//! optimum and the region `S`: everything `J` with
//! `J*_S ≤ J ≤ J̃` for some member `J̃` of `S`. Value iteration is
//! well behaved exactly when started here.

use abstract_model::FiniteModel;
use extreal_core::{CostFunction, ExtendedReal};

use crate::certify::opt_over_regular;
use crate::error::RegularityError;
use crate::region::{RegularityOptions, SRegionDescriptor, SRegionKind};

/// The well-behaved region: lower boundary plus a closed-form upper
/// test derived from the region kind.
#[derive(Clone, Debug)]
pub struct WellBehavedRegion {
    lower: CostFunction,
    kind: SRegionKind,
    stop_mask: Vec<bool>,
    finite_mask: Option<Vec<bool>>,
    recurrent_mask: Option<Vec<bool>>,
    tol: f64,
    upper_description: &'static str,
}

/// Builds the region record for the model: the lower boundary is the
/// optimum over certified-regular policies, the upper test is the
/// kind's closed form for "`J ≤ J̃` for some `J̃ ∈ S`".
pub fn well_behaved_region(
    model: &FiniteModel,
    region: &SRegionDescriptor,
    options: &RegularityOptions,
) -> Result<WellBehavedRegion, RegularityError> {
    let lower = opt_over_regular(model, region, options)?;
    let upper_description = match region.kind() {
        SRegionKind::AllReal | SRegionKind::BoundedBelow => {
            "dominated by a real-valued function: finite above in every coordinate"
        }
        SRegionKind::NonnegExtended => "no upper constraint: +infinity belongs to the region",
        SRegionKind::ZeroOnStopSet => {
            "nonpositive on the stop set, finite above wherever the unrestricted optimum is finite"
        }
        SRegionKind::ExpectationVanishing => {
            "finite above, nonpositive on every state some policy keeps recurrent"
        }
    };
    Ok(WellBehavedRegion {
        lower,
        kind: region.kind(),
        stop_mask: region.stop_mask().to_vec(),
        finite_mask: region.finite_mask().map(<[bool]>::to_vec),
        recurrent_mask: region.recurrent_mask().map(<[bool]>::to_vec),
        tol: options.tol,
        upper_description,
    })
}

impl WellBehavedRegion {
    /// The lower boundary, the optimum over certified-regular policies.
    pub fn lower(&self) -> &CostFunction {
        &self.lower
    }

    /// Human-readable statement of the upper test.
    pub fn upper_description(&self) -> &str {
        self.upper_description
    }

    pub fn kind(&self) -> SRegionKind {
        self.kind
    }

    /// Membership: zero on the stop set, `lower ≤ J` within tolerance,
    /// and `J` is dominated by some member of the region.
    ///
    /// The stop pinning is what makes the region a basin: the operator
    /// preserves stop coordinates exactly, so iterates started off the
    /// zero slice carry their offset forever and never reach the
    /// restricted optimum.
    pub fn contains(&self, j: &CostFunction) -> bool {
        assert_eq!(j.len(), self.lower.len(), "cost function length mismatch");
        let tol = ExtendedReal::new(self.tol);
        let pinned = (0..j.len())
            .all(|x| !self.stop_mask[x] || j[x].abs_diff(ExtendedReal::new(0.0)) <= tol);
        let above_lower = (0..j.len()).all(|x| ge_with_tol(j[x], self.lower[x], self.tol));
        pinned && above_lower && self.below_some_member(j)
    }

    fn below_some_member(&self, j: &CostFunction) -> bool {
        let zero = ExtendedReal::new(0.0);
        let tol = ExtendedReal::new(self.tol);
        match self.kind {
            SRegionKind::AllReal | SRegionKind::BoundedBelow => {
                j.iter().all(|v| v < ExtendedReal::PosInf)
            }
            SRegionKind::NonnegExtended => true,
            SRegionKind::ZeroOnStopSet => {
                let finite = self.finite_mask.as_ref().expect("mask built with kind");
                (0..j.len()).all(|x| {
                    if self.stop_mask[x] {
                        j[x] <= zero + tol
                    } else {
                        !finite[x] || j[x] < ExtendedReal::PosInf
                    }
                })
            }
            SRegionKind::ExpectationVanishing => {
                // Sound but conservative on stochastic chains: a member
                // dominating J is built as 0 on recurrent-capable
                // states and any finite values elsewhere, since mass on
                // the remaining states washes out of every expectation.
                let recurrent = self.recurrent_mask.as_ref().expect("mask built with kind");
                (0..j.len()).all(|x| {
                    if recurrent[x] || self.stop_mask[x] {
                        j[x] <= zero + tol
                    } else {
                        j[x] < ExtendedReal::PosInf
                    }
                })
            }
        }
    }
}

/// `a ≥ b − tol` in extended arithmetic.
fn ge_with_tol(a: ExtendedReal, b: ExtendedReal, tol: f64) -> bool {
    match (a, b) {
        (_, ExtendedReal::NegInf) => true,
        (ExtendedReal::PosInf, _) => true,
        (_, ExtendedReal::PosInf) => false,
        (ExtendedReal::NegInf, _) => false,
        (ExtendedReal::Finite(x), ExtendedReal::Finite(y)) => x >= y - tol,
    }
}
