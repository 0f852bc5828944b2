use std::collections::VecDeque;

use extreal_core::{mixed_infinity_events, CostFunction, ExtendedReal, DEFAULT_TOL};

use crate::error::ModelError;
use crate::model::FiniteModel;
use crate::policy::{EventuallyStationaryPolicy, PairSetDescriptor, StationaryPolicy};

/// Right-to-left finite-horizon composition
/// `T_{μ₀}(T_{μ₁}(… T_{μ_{m−1}} J))`. The empty sequence is the identity.
pub fn compose_prefix(
    model: &FiniteModel,
    policies: &[StationaryPolicy],
    j: &CostFunction,
) -> CostFunction {
    let mut out = j.clone();
    for mu in policies.iter().rev() {
        out = model.apply_tmu(mu, &out);
    }
    out
}

/// Controls for the limsup policy-cost evaluation.
#[derive(Clone, Debug)]
pub struct PolicyCostOptions {
    /// Maximum number of tail applications before giving up on
    /// uncertified states.
    pub horizon_cap: usize,
    /// Magnitude past which certified monotone drift is declared `±∞`.
    pub blowup_bound: f64,
    /// Absolute tolerance for "successive iterates settle".
    pub tol: f64,
    /// Trailing-window length for drift certificates and limsup
    /// estimates.
    pub window: usize,
}

impl Default for PolicyCostOptions {
    fn default() -> Self {
        PolicyCostOptions {
            horizon_cap: 100_000,
            blowup_bound: 1e12,
            tol: DEFAULT_TOL,
            window: 32,
        }
    }
}

/// What the evaluation could certify about one state's cost sequence.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CostCertificate {
    /// Successive iterates settled within tolerance; the value is the
    /// (numerical) limit.
    Settled,
    /// Iterates grew monotonically through the blow-up bound; the value
    /// is `+∞`.
    DivergedPlus,
    /// Iterates fell monotonically through the negated blow-up bound;
    /// the value is `−∞`.
    DivergedMinus,
    /// Bounded non-monotone iterates that never settled; the value is
    /// the trailing-window maximum, the limsup estimate.
    Oscillating,
    /// No certificate fired within the horizon; the value is the
    /// trailing-window maximum and should not be trusted as a limit.
    Uncertified,
}

impl CostCertificate {
    /// True for the certificates that pin down the limsup exactly
    /// (up to the settling tolerance).
    pub fn is_certified(self) -> bool {
        matches!(
            self,
            CostCertificate::Settled
                | CostCertificate::DivergedPlus
                | CostCertificate::DivergedMinus
        )
    }
}

/// Result of the limsup policy-cost evaluation.
#[derive(Clone, Debug)]
pub struct PolicyCostResult {
    pub cost: CostFunction,
    /// Per-state certificate aligned with `cost`.
    pub certificates: Vec<CostCertificate>,
    /// Tail applications actually performed.
    pub iterations: usize,
    /// Whether the `(+∞) + (−∞) = +∞` convention fired during this
    /// evaluation; results that relied on it deserve an audit.
    pub mixed_infinity_exercised: bool,
}

impl PolicyCostResult {
    pub fn all_certified(&self) -> bool {
        self.certificates.iter().all(|c| c.is_certified())
    }
}

/// Per-state bookkeeping over the iterate sequence.
struct StateTrack {
    window: VecDeque<ExtendedReal>,
    /// Consecutive strictly increasing / decreasing steps.
    inc_run: usize,
    dec_run: usize,
    /// Whether the window has recorded both an up and a down move.
    saw_up: bool,
    saw_down: bool,
}

impl StateTrack {
    fn new(first: ExtendedReal, window: usize) -> Self {
        let mut w = VecDeque::with_capacity(window + 1);
        w.push_back(first);
        StateTrack {
            window: w,
            inc_run: 0,
            dec_run: 0,
            saw_up: false,
            saw_down: false,
        }
    }

    fn push(&mut self, prev: ExtendedReal, cur: ExtendedReal, window: usize) {
        if cur > prev {
            self.inc_run += 1;
            self.dec_run = 0;
            self.saw_up = true;
        } else if cur < prev {
            self.dec_run += 1;
            self.inc_run = 0;
            self.saw_down = true;
        } else {
            self.inc_run = 0;
            self.dec_run = 0;
        }
        self.window.push_back(cur);
        if self.window.len() > window + 1 {
            self.window.pop_front();
        }
    }

    fn window_max(&self) -> ExtendedReal {
        *self.window.iter().max().expect("window is never empty")
    }
}

/// Evaluates the cost of an eventually-stationary policy as the limsup
/// of its finite-horizon costs from the model's terminal function.
///
/// The iterates are `T_{μ₀} ⋯ T_{μ_{m−1}} T_μᵏ J̄` for the prefix
/// `μ₀…μ_{m−1}` and tail `μ`, for `k = 0, 1, …`. Per state:
///
/// * settle within `tol` between successive iterates ⇒ finite value,
///   [`CostCertificate::Settled`];
/// * at least `window` consecutive strictly monotone steps ending beyond
///   `±blowup_bound` ⇒ `±∞`, [`CostCertificate::DivergedPlus`] /
///   [`DivergedMinus`](CostCertificate::DivergedMinus);
/// * otherwise the horizon runs out and the state is flagged, with the
///   trailing-window maximum reported as the limsup estimate.
///
/// Uncertified states are reported, never guessed. Note the settle test
/// is sound here because every `T_μ` in scope is sup-norm nonexpansive
/// (row-stochastic transitions, `α ≤ 1`), so one-step differences never
/// grow.
pub fn policy_cost(
    model: &FiniteModel,
    pi: &EventuallyStationaryPolicy,
    options: &PolicyCostOptions,
) -> PolicyCostResult {
    policy_cost_from(model, pi, model.terminal(), options)
}

/// Same certified iteration as [`policy_cost`], but the tail sequence
/// starts from `j0` instead of the model's terminal function. This is
/// the workhorse for convergence probes: `T_μᵏ j0` for `k = 0, 1, …`,
/// with the same per-state certificates.
pub fn policy_cost_from(
    model: &FiniteModel,
    pi: &EventuallyStationaryPolicy,
    j0: &CostFunction,
    options: &PolicyCostOptions,
) -> PolicyCostResult {
    assert!(options.horizon_cap >= 1, "horizon_cap must be at least 1");
    assert!(options.blowup_bound > 0.0, "blowup_bound must be positive");
    assert_eq!(j0.len(), model.n_states(), "start length mismatch");
    let n = model.n_states();
    let mixed_before = mixed_infinity_events();
    let bound = ExtendedReal::new(options.blowup_bound);
    let neg_bound = ExtendedReal::new(-options.blowup_bound);

    let mut tail_iterate = j0.clone();
    let mut prev = compose_prefix(model, &pi.prefix, &tail_iterate);
    let mut tracks: Vec<StateTrack> = prev
        .iter()
        .map(|v| StateTrack::new(v, options.window))
        .collect();

    let mut iterations = 0;
    let mut settled = vec![false; n];
    while iterations < options.horizon_cap {
        tail_iterate = model.apply_tmu(&pi.tail, &tail_iterate);
        let cur = if pi.prefix.is_empty() {
            tail_iterate.clone()
        } else {
            compose_prefix(model, &pi.prefix, &tail_iterate)
        };
        iterations += 1;

        let mut all_resolved = true;
        for x in 0..n {
            tracks[x].push(prev[x], cur[x], options.window);
            settled[x] = cur[x].abs_diff(prev[x]) <= ExtendedReal::new(options.tol);
            let diverged = (tracks[x].inc_run >= options.window && cur[x] > bound)
                || (tracks[x].dec_run >= options.window && cur[x] < neg_bound);
            if !settled[x] && !diverged {
                all_resolved = false;
            }
        }
        prev = cur;
        if all_resolved {
            break;
        }
    }

    let mut values = Vec::with_capacity(n);
    let mut certificates = Vec::with_capacity(n);
    for x in 0..n {
        let t = &tracks[x];
        if settled[x] {
            values.push(prev[x]);
            certificates.push(CostCertificate::Settled);
        } else if t.inc_run >= options.window && prev[x] > bound {
            values.push(ExtendedReal::PosInf);
            certificates.push(CostCertificate::DivergedPlus);
        } else if t.dec_run >= options.window && prev[x] < neg_bound {
            values.push(ExtendedReal::NegInf);
            certificates.push(CostCertificate::DivergedMinus);
        } else {
            let estimate = t.window_max();
            let bounded_finite = t
                .window
                .iter()
                .all(|v| v.is_finite() && v.abs_diff(ExtendedReal::new(0.0)) <= bound);
            if bounded_finite && t.saw_up && t.saw_down {
                values.push(estimate);
                certificates.push(CostCertificate::Oscillating);
            } else {
                values.push(estimate);
                certificates.push(CostCertificate::Uncertified);
            }
        }
    }

    PolicyCostResult {
        cost: CostFunction::new(values),
        certificates,
        iterations,
        mixed_infinity_exercised: mixed_infinity_events() > mixed_before,
    }
}

/// Controls for [`restricted_opt_cost`].
#[derive(Clone, Debug)]
pub struct RestrictedOptOptions {
    /// Upper bound on how many stationary policies may be enumerated.
    pub enumeration_limit: u128,
    pub cost: PolicyCostOptions,
}

impl Default for RestrictedOptOptions {
    fn default() -> Self {
        RestrictedOptOptions {
            enumeration_limit: 1_000_000,
            cost: PolicyCostOptions::default(),
        }
    }
}

/// The restricted optimal cost: per state, the infimum of policy costs
/// over the admissible policy-state pairs described by `descriptor`.
///
/// Stationary policies are enumerated exhaustively (guarded by the
/// enumeration limit) and evaluated with [`policy_cost`]; states with an
/// empty admissible set come out `+∞`. For
/// [`PairSetDescriptor::RegularStationaryPairs`] the infimum ranges over
/// exactly the supplied policies.
pub fn restricted_opt_cost(
    model: &FiniteModel,
    descriptor: &PairSetDescriptor,
    options: &RestrictedOptOptions,
) -> Result<CostFunction, ModelError> {
    let policies: Vec<StationaryPolicy> = match descriptor {
        PairSetDescriptor::RegularStationaryPairs { regular } => {
            for mu in regular {
                model.validate_policy(mu)?;
            }
            regular.clone()
        }
        _ => model.enumerate_policies(options.enumeration_limit)?,
    };

    let n = model.n_states();
    let mut best = CostFunction::constant(n, ExtendedReal::PosInf);
    for mu in policies {
        let result = policy_cost(
            model,
            &EventuallyStationaryPolicy::stationary(mu),
            &options.cost,
        );
        for x in 0..n {
            let value = result.cost[x];
            let admissible = match descriptor {
                PairSetDescriptor::FiniteCostPairs => value < ExtendedReal::PosInf,
                _ => true,
            };
            if admissible && value < best[x] {
                best.set(x, value);
            }
        }
    }
    Ok(best)
}
