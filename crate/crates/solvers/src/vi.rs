//! Fixed-point iteration of the optimal one-step operator, with
//! divergence and cycle detection, plus a seeded check that the
//! well-behaved region really is a convergence basin.

use abstract_model::FiniteModel;
use extreal_core::{CostFunction, ExtendedReal};
use rand::distributions::{Distribution, Uniform};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use regularity::{well_behaved_region, RegularityOptions, SRegionDescriptor};

use crate::error::SolverError;
use crate::trace::{SolveOutcome, SolveTrace};

/// Knobs for the divergence and cycle detectors.
#[derive(Clone, Debug)]
pub struct ViOptions {
    /// Magnitude past which sustained monotone drift is declared
    /// divergence.
    pub blowup_bound: f64,
    /// Consecutive same-direction moves a state needs before the
    /// blowup bound is consulted.
    pub drift_window: usize,
    /// Longest period tested when looking for a repeat of an earlier
    /// iterate.
    pub cycle_window: usize,
}

impl Default for ViOptions {
    fn default() -> Self {
        ViOptions {
            blowup_bound: 1e12,
            drift_window: 32,
            cycle_window: 16,
        }
    }
}

/// Iterates `J_{k+1} = TJ_k` until the sup-norm residual drops to
/// `tol`, with default divergence/cycle detection.
///
/// `iterations` counts operator applications performed, so a run that
/// first attains its limit at iterate `k` reports `k + 1`: one more
/// application is needed to observe a residual within tolerance.
/// `Stalled` with a final residual ≤ tol means the start was already a
/// fixed point; whether that fixed point is the wanted one is for the
/// caller to judge. `Stalled` with a larger final residual means the
/// iteration budget ran out.
pub fn value_iteration(
    model: &FiniteModel,
    j0: &CostFunction,
    tol: f64,
    max_iter: usize,
) -> SolveTrace {
    value_iteration_with(model, j0, tol, max_iter, &ViOptions::default())
}

/// [`value_iteration`] with explicit detector knobs.
///
/// Cycle detection requires an exact repeat of an earlier iterate
/// (distance zero) at period ≥ 2 inside the trailing window; damped
/// alternation therefore never reads as a cycle and either converges or
/// exhausts the budget.
pub fn value_iteration_with(
    model: &FiniteModel,
    j0: &CostFunction,
    tol: f64,
    max_iter: usize,
    options: &ViOptions,
) -> SolveTrace {
    assert!(tol > 0.0 && tol.is_finite(), "tol must be positive");
    assert_eq!(j0.len(), model.n_states(), "start length mismatch");
    assert!(options.drift_window >= 1, "drift_window must be positive");

    let n = model.n_states();
    let tol_e = ExtendedReal::new(tol);
    let zero = ExtendedReal::new(0.0);
    let mut iterates: Vec<CostFunction> = Vec::new();
    let mut residuals: Vec<ExtendedReal> = Vec::new();
    let mut greedy = Vec::new();
    let mut up_run = vec![0usize; n];
    let mut down_run = vec![0usize; n];
    let mut current = j0.clone();
    let mut iterations = 0usize;

    let outcome = loop {
        if iterations == max_iter {
            break SolveOutcome::Stalled(current);
        }
        let (next, mu) = model.apply_t(&current);
        iterations += 1;
        let residual = next.sup_distance(&current);
        iterates.push(current.clone());
        residuals.push(residual);
        greedy.push(mu);
        if residual <= tol_e {
            break if iterations == 1 {
                SolveOutcome::Stalled(current)
            } else {
                SolveOutcome::Converged(current)
            };
        }

        let mut drifting = Vec::new();
        for x in 0..n {
            let moved = next[x].abs_diff(current[x]) > tol_e;
            if moved && next[x] > current[x] {
                up_run[x] += 1;
                down_run[x] = 0;
            } else if moved && next[x] < current[x] {
                down_run[x] += 1;
                up_run[x] = 0;
            } else {
                up_run[x] = 0;
                down_run[x] = 0;
            }
            let past_bound = match next[x] {
                ExtendedReal::Finite(v) => v.abs() > options.blowup_bound,
                _ => true,
            };
            if up_run[x].max(down_run[x]) >= options.drift_window && past_bound {
                drifting.push(x);
            }
        }
        if !drifting.is_empty() {
            break SolveOutcome::Diverged(drifting);
        }

        let len = iterates.len();
        let mut cycle = None;
        for period in 2..=options.cycle_window.min(len) {
            if next.sup_distance(&iterates[len - period]) == zero {
                cycle = Some(period);
                break;
            }
        }
        if let Some(period) = cycle {
            break SolveOutcome::Oscillating(greedy[len - period..].to_vec());
        }

        current = next;
    };

    SolveTrace {
        iterates,
        residuals,
        policies: Vec::new(),
        outcome,
        iterations,
    }
}

/// One starting point probed by [`vi_region_check`].
#[derive(Clone, Debug)]
pub struct RegionProbe {
    pub start: CostFunction,
    pub inside: bool,
    pub outcome: SolveOutcome,
    /// Sup distance of the observed limit from the region's lower
    /// boundary; `None` when the run produced no single limit.
    pub gap_to_optimum: Option<ExtendedReal>,
}

/// Outcome of probing the convergence basin from inside and outside.
#[derive(Clone, Debug)]
pub struct ViRegionReport {
    /// The restricted optimum the inside runs must reach.
    pub target: CostFunction,
    pub probes: Vec<RegionProbe>,
    /// True when every inside probe converged to the target.
    pub inside_all_converged: bool,
}

/// Draws seeded starts inside the well-behaved region of `region` and
/// just below its lower boundary, runs value iteration from each, and
/// checks that every inside start converges to the restricted optimum.
/// Outside starts are run and recorded without any assertion: the
/// convergence claim is one-sided.
///
/// Inside starts are the lower boundary plus uniform offsets in
/// `[0, 5)` at non-stop coordinates (stop coordinates stay zero), which
/// lands in the region for every region kind. Outside starts push one
/// non-stop coordinate below the boundary by a uniform amount in
/// `[0.5, 3)`. States where the boundary itself is infinite make inside
/// sampling impossible and produce an error.
pub fn vi_region_check(
    model: &FiniteModel,
    region: &SRegionDescriptor,
    samples: usize,
    seed: u64,
    options: &RegularityOptions,
) -> Result<ViRegionReport, SolverError> {
    let basin = well_behaved_region(model, region, options)?;
    let target = basin.lower().clone();
    let n = model.n_states();
    let free: Vec<usize> = (0..n).filter(|&x| !model.is_stop(x)).collect();
    for &x in &free {
        if !target[x].is_finite() {
            return Err(SolverError::NonFiniteBoundary { state: x });
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lift = Uniform::new(0.0, 5.0);
    let drop = Uniform::new(0.5, 3.0);
    let tol = options.tol;
    let tol_e = ExtendedReal::new(tol);
    let mut probes = Vec::new();
    let mut inside_all_converged = true;

    for k in 0..samples {
        let mut start = CostFunction::zeros(n);
        for &x in &free {
            start.set(x, target[x] + ExtendedReal::new(lift.sample(&mut rng)));
        }
        debug_assert!(basin.contains(&start), "inside draw left the region");
        let trace = value_iteration(model, &start, tol, crate::trace::DEFAULT_MAX_ITER);
        let gap = trace.final_value().map(|j| j.sup_distance(&target));
        let converged = matches!(gap, Some(g) if g <= tol_e.scale(100.0));
        if !converged {
            inside_all_converged = false;
        }
        probes.push(RegionProbe {
            start,
            inside: true,
            outcome: trace.outcome,
            gap_to_optimum: gap,
        });

        if free.is_empty() {
            continue;
        }
        let mut below = CostFunction::zeros(n);
        for &x in &free {
            below.set(x, target[x]);
        }
        let pick = free[k % free.len()];
        below.set(pick, target[pick] + ExtendedReal::new(-drop.sample(&mut rng)));
        let trace = value_iteration(model, &below, tol, crate::trace::DEFAULT_MAX_ITER);
        let gap = trace.final_value().map(|j| j.sup_distance(&target));
        probes.push(RegionProbe {
            start: below,
            inside: false,
            outcome: trace.outcome,
            gap_to_optimum: gap,
        });
    }

    Ok(ViRegionReport {
        target,
        probes,
        inside_all_converged,
    })
}
