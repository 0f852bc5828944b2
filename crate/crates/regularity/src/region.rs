//! Candidate regions `S` of cost functions, with decidable membership
//! on finite state spaces and a finite probe set drawn from the region.
//!
//! Probes stand in for "all `J ∈ S`" in the convergence clause of the
//! regularity definition, so every certificate issued against them is
//! sampler-relative by construction.

use abstract_model::{
    restricted_opt_cost, FiniteModel, PairSetDescriptor, PolicyCostOptions, RestrictedOptOptions,
};
use extreal_core::{CostFunction, ExtendedReal, DEFAULT_TOL};
use rand::distributions::{Distribution, Uniform};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::chain::recurrent_union;
use crate::error::RegularityError;

/// Number of probes the default sampler aims for (duplicates are
/// dropped, so degenerate models may carry fewer).
pub const DEFAULT_PROBE_COUNT: usize = 16;

/// Which set of extended-real cost functions plays the role of `S`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SRegionKind {
    /// Real-valued functions: finite in every coordinate.
    AllReal,
    /// Nonnegative extended-real functions: `0 ≤ J(x) ≤ +∞`.
    NonnegExtended,
    /// Real-valued functions bounded below. On a finite state space
    /// every real-valued function is bounded below, so this coincides
    /// with [`SRegionKind::AllReal`]; the kind is kept so callers can
    /// say which set they mean.
    BoundedBelow,
    /// Zero on the stop set, real-valued wherever the unrestricted
    /// optimum is finite, and nowhere `−∞`.
    ZeroOnStopSet,
    /// Functions whose expectation under every stationary policy's
    /// chain vanishes: `E{J(x_k)} → 0` from every start. Decided
    /// numerically by pushing `J` through each chain's transition
    /// matrix; the push is sup-norm nonexpansive, so "once below
    /// tolerance" is conclusive.
    ExpectationVanishing,
}

/// Shared knobs for classification, probing, and region membership.
#[derive(Clone, Debug)]
pub struct RegularityOptions {
    /// Iteration cap for convergence probes and expectation pushes.
    pub horizon_cap: usize,
    /// Absolute tolerance for settling and membership boundary tests.
    pub tol: f64,
    /// How far a settled probe limit must sit from `J_μ` before the
    /// mismatch counts as a refutation rather than noise.
    pub mismatch_tol: f64,
    /// Bound on exhaustive policy enumeration.
    pub enumeration_limit: u128,
    /// Evaluation controls for `J_μ` itself.
    pub cost: PolicyCostOptions,
}

impl Default for RegularityOptions {
    fn default() -> Self {
        RegularityOptions {
            horizon_cap: 10_000,
            tol: DEFAULT_TOL,
            mismatch_tol: 1e-6,
            enumeration_limit: 1_000_000,
            cost: PolicyCostOptions::default(),
        }
    }
}

/// A region `S` bound to one model: its kind, the masks the membership
/// predicate needs, and the probe set.
#[derive(Clone, Debug)]
pub struct SRegionDescriptor {
    kind: SRegionKind,
    probes: Vec<CostFunction>,
    /// Stop-set indicator; probes are pinned to zero here because the
    /// per-policy operators preserve stop coordinates exactly.
    stop_mask: Vec<bool>,
    /// `ZeroOnStopSet` only: states where the unrestricted optimum is
    /// finite, hence where members must be real-valued.
    finite_mask: Option<Vec<bool>>,
    /// `ExpectationVanishing` only: states inside some policy's closed
    /// recurrent class, where values never wash out of expectations.
    recurrent_mask: Option<Vec<bool>>,
}

impl SRegionDescriptor {
    /// Builds the region with the default probe set: the terminal
    /// function, the unrestricted optimum, scaled and shifted variants
    /// of both, and seeded random draws, all projected into the region
    /// and deduplicated.
    pub fn with_default_sampler(
        kind: SRegionKind,
        model: &FiniteModel,
        seed: u64,
        options: &RegularityOptions,
    ) -> Result<Self, RegularityError> {
        let mut region = Self::empty(kind, model, options)?;

        let j_bar = model.terminal().clone();
        let j_star = restricted_opt_cost(
            model,
            &PairSetDescriptor::AllPairs,
            &RestrictedOptOptions {
                enumeration_limit: options.enumeration_limit,
                cost: options.cost.clone(),
            },
        )?;

        let mut candidates = vec![CostFunction::zeros(model.n_states())];
        for base in [&j_bar, &j_star] {
            candidates.push(base.clone());
            candidates.push(scale(base, 0.5));
            candidates.push(scale(base, 2.0));
            candidates.push(shift(base, 1.0));
            candidates.push(shift(base, -1.0));
        }
        for candidate in candidates {
            let probe = region.project(&candidate);
            if region.probes.len() < DEFAULT_PROBE_COUNT
                && region.contains(model, &probe, options)?
                && !region.has_probe(&probe, options.tol)
            {
                region.probes.push(probe);
            }
        }

        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let range = match kind {
            SRegionKind::NonnegExtended => Uniform::new_inclusive(0.0, 10.0),
            _ => Uniform::new_inclusive(-10.0, 10.0),
        };
        let mut attempts = 0;
        while region.probes.len() < DEFAULT_PROBE_COUNT && attempts < 4 * DEFAULT_PROBE_COUNT {
            attempts += 1;
            let raw: CostFunction = (0..model.n_states())
                .map(|_| ExtendedReal::new(range.sample(&mut rng)))
                .collect();
            let probe = region.project(&raw);
            if region.contains(model, &probe, options)? && !region.has_probe(&probe, options.tol) {
                region.probes.push(probe);
            }
        }

        debug_assert!(!region.probes.is_empty(), "zero function always qualifies");
        Ok(region)
    }

    /// Builds the region around caller-supplied probes, each checked
    /// against the membership predicate.
    pub fn with_probes(
        kind: SRegionKind,
        model: &FiniteModel,
        probes: Vec<CostFunction>,
        options: &RegularityOptions,
    ) -> Result<Self, RegularityError> {
        let mut region = Self::empty(kind, model, options)?;
        for (index, probe) in probes.into_iter().enumerate() {
            if !region.contains(model, &probe, options)? {
                return Err(RegularityError::ProbeOutsideRegion { index });
            }
            region.probes.push(probe);
        }
        Ok(region)
    }

    fn empty(
        kind: SRegionKind,
        model: &FiniteModel,
        options: &RegularityOptions,
    ) -> Result<Self, RegularityError> {
        let n = model.n_states();
        let mut stop_mask = vec![false; n];
        for &x in model.stop_set() {
            stop_mask[x] = true;
        }
        let finite_mask = if kind == SRegionKind::ZeroOnStopSet {
            let j_star = restricted_opt_cost(
                model,
                &PairSetDescriptor::AllPairs,
                &RestrictedOptOptions {
                    enumeration_limit: options.enumeration_limit,
                    cost: options.cost.clone(),
                },
            )?;
            Some((0..n).map(|x| j_star[x] < ExtendedReal::PosInf).collect())
        } else {
            None
        };
        let recurrent_mask = if kind == SRegionKind::ExpectationVanishing {
            Some(recurrent_union(model, options.enumeration_limit)?)
        } else {
            None
        };
        Ok(SRegionDescriptor {
            kind,
            probes: Vec::new(),
            stop_mask,
            finite_mask,
            recurrent_mask,
        })
    }

    pub fn kind(&self) -> SRegionKind {
        self.kind
    }

    pub fn probes(&self) -> &[CostFunction] {
        &self.probes
    }

    pub(crate) fn stop_mask(&self) -> &[bool] {
        &self.stop_mask
    }

    pub(crate) fn finite_mask(&self) -> Option<&[bool]> {
        self.finite_mask.as_deref()
    }

    pub(crate) fn recurrent_mask(&self) -> Option<&[bool]> {
        self.recurrent_mask.as_deref()
    }

    /// The membership predicate for this region. Only the
    /// vanishing-expectation kind needs the model (and can fail, on its
    /// policy enumeration); the others are pointwise tests.
    pub fn contains(
        &self,
        model: &FiniteModel,
        j: &CostFunction,
        options: &RegularityOptions,
    ) -> Result<bool, RegularityError> {
        assert_eq!(j.len(), self.stop_mask.len(), "cost function length mismatch");
        let ok = match self.kind {
            SRegionKind::AllReal | SRegionKind::BoundedBelow => j.iter().all(|v| v.is_finite()),
            SRegionKind::NonnegExtended => j.iter().all(|v| v >= ExtendedReal::new(0.0)),
            SRegionKind::ZeroOnStopSet => {
                let finite = self.finite_mask.as_ref().expect("mask built with kind");
                (0..j.len()).all(|x| {
                    let v = j[x];
                    if v == ExtendedReal::NegInf {
                        return false;
                    }
                    if self.stop_mask[x] {
                        return v.abs_diff(ExtendedReal::new(0.0))
                            <= ExtendedReal::new(options.tol);
                    }
                    !finite[x] || v.is_finite()
                })
            }
            SRegionKind::ExpectationVanishing => {
                return expectation_vanishes_under_all(model, j, options)
            }
        };
        Ok(ok)
    }

    /// Pushes a candidate toward the region: stop coordinates are
    /// zeroed (the operators preserve them exactly, so nonzero values
    /// there can never converge to any policy cost), and each kind
    /// clamps what its membership test would reject. The result is not
    /// guaranteed to be a member — infinities in the candidate can
    /// survive — so callers re-check.
    fn project(&self, candidate: &CostFunction) -> CostFunction {
        (0..candidate.len())
            .map(|x| {
                let v = candidate[x];
                if self.stop_mask[x] {
                    return ExtendedReal::new(0.0);
                }
                match self.kind {
                    SRegionKind::NonnegExtended => {
                        if v < ExtendedReal::new(0.0) {
                            ExtendedReal::new(0.0)
                        } else {
                            v
                        }
                    }
                    SRegionKind::ExpectationVanishing => {
                        let recurrent = self.recurrent_mask.as_ref().expect("mask built");
                        if recurrent[x] {
                            ExtendedReal::new(0.0)
                        } else {
                            v
                        }
                    }
                    _ => v,
                }
            })
            .collect()
    }

    fn has_probe(&self, candidate: &CostFunction, tol: f64) -> bool {
        self.probes
            .iter()
            .any(|p| p.approx_eq(candidate, tol))
    }
}

/// `E{J(x_k)} → 0` from every start, under every enumerated stationary
/// policy. The expectation vector is `P_μ^k J`, computed by repeated
/// pushes; its sup-norm never increases (rows are stochastic), so the
/// test concludes as soon as the norm dips below tolerance, and fails
/// if the horizon runs out first.
fn expectation_vanishes_under_all(
    model: &FiniteModel,
    j: &CostFunction,
    options: &RegularityOptions,
) -> Result<bool, RegularityError> {
    let zero = ExtendedReal::new(0.0);
    let tol = ExtendedReal::new(options.tol);
    for mu in model.enumerate_policies(options.enumeration_limit)? {
        let mut v = j.clone();
        let mut vanished = false;
        for _ in 0..=options.horizon_cap {
            let sup = v
                .iter()
                .map(|val| val.abs_diff(zero))
                .max()
                .expect("nonempty state space");
            if sup <= tol {
                vanished = true;
                break;
            }
            v = (0..model.n_states())
                .map(|x| {
                    model
                        .control(x, mu.control(x))
                        .expect("enumerated policy is feasible")
                        .transitions
                        .iter()
                        .map(|&(p, y)| v[y].scale(p))
                        .sum::<ExtendedReal>()
                })
                .collect();
        }
        if !vanished {
            return Ok(false);
        }
    }
    Ok(true)
}

fn scale(j: &CostFunction, factor: f64) -> CostFunction {
    j.iter().map(|v| v.scale(factor)).collect()
}

fn shift(j: &CostFunction, offset: f64) -> CostFunction {
    j.iter().map(|v| v + ExtendedReal::new(offset)).collect()
}
