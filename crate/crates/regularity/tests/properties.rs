//! Seed-swept invariants tying certification, properness, restricted
//! optima, and fixed-point scans together on random small models.

use abstract_model::{
    restricted_opt_cost, Control, FiniteModel, PairSetDescriptor, PolicyCostOptions,
    RestrictedOptOptions, StationaryPolicy,
};
use extreal_core::{CostFunction, ExtendedReal};
use models::{build_detsp, build_nonneg_mdp, build_random_ssp, DetSpParams};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use regularity::*;

use ExtendedReal::{Finite, NegInf, PosInf};

/// Horizons tuned for seed sweeps: drifting iterates certify against
/// the small blow-up bound well inside the cap.
fn opts() -> RegularityOptions {
    RegularityOptions {
        horizon_cap: 20_000,
        cost: PolicyCostOptions {
            horizon_cap: 20_000,
            blowup_bound: 1e3,
            ..PolicyCostOptions::default()
        },
        ..RegularityOptions::default()
    }
}

fn all_real(model: &FiniteModel, seed: u64) -> SRegionDescriptor {
    SRegionDescriptor::with_default_sampler(SRegionKind::AllReal, model, seed, &opts()).unwrap()
}

/// `a ≤ b + tol` in extended arithmetic.
fn le_with_tol(a: ExtendedReal, b: ExtendedReal, tol: f64) -> bool {
    match (a, b) {
        (NegInf, _) | (_, PosInf) => true,
        (PosInf, _) | (_, NegInf) => false,
        (Finite(x), Finite(y)) => x <= y + tol,
    }
}

/// Per-state scan grids bracketing `center`, with stop states pinned to
/// zero so the scan stays on the slice the operator can move.
fn offset_grids(model: &FiniteModel, center: &CostFunction) -> Vec<Vec<f64>> {
    (0..model.n_states())
        .map(|x| {
            if model.is_stop(x) {
                return vec![0.0];
            }
            match center[x] {
                Finite(v) => [-1.0, -0.5, 0.0, 0.5, 1.0].iter().map(|d| v + d).collect(),
                _ => vec![0.0],
            }
        })
        .collect()
}

#[test]
fn proper_policies_are_never_refuted_over_the_reals() {
    // Properness gives a real-valued cost that attracts every real
    // start, so the only honest verdicts are Certified and, when a
    // horizon runs out, Unknown.
    for seed in 0..25 {
        let m = build_random_ssp(4, 2, (0.0, 1.0), 0.0, seed).unwrap();
        let region = all_real(&m, seed);
        for record in classify_policies(&m, &region, &opts()).unwrap() {
            if record.proper == Some(true) {
                assert_ne!(
                    record.verdict,
                    RegularityVerdict::Refuted,
                    "seed {seed}: proper policy {:?} refuted",
                    record.policy
                );
            }
        }
    }
}

#[test]
fn zero_cost_cycles_are_refuted_over_the_reals() {
    // A policy that parks in a free loop has a finite fixed cost, but
    // shifted probes are fixed too, so clause three fails provably.
    for seed in 0..20 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r0 = rng.gen_range(0.5..3.0);
        let r1 = rng.gen_range(0.5..3.0);
        let r2 = rng.gen_range(0.5..3.0);
        let m = FiniteModel::new(
            vec![
                vec![
                    Control::new(0, r0, vec![(1.0, 2)]),
                    Control::new(1, r1, vec![(1.0, 1)]),
                ],
                vec![
                    Control::new(0, 0.0, vec![(1.0, 1)]),
                    Control::new(1, r2, vec![(1.0, 2)]),
                ],
                vec![Control::new(0, 0.0, vec![(1.0, 2)])],
            ],
            1.0,
            CostFunction::zeros(3),
            [2],
        )
        .unwrap();
        let parked = StationaryPolicy::new_unchecked(vec![1, 0, 0]);
        assert!(!classify_proper(&m, &parked).unwrap());
        let region = all_real(&m, seed);
        let verdict = certify_s_regular(&m, &parked, &region, &opts()).unwrap();
        assert_eq!(verdict, RegularityVerdict::Refuted, "seed {seed}");
    }
}

#[test]
fn restricted_optimum_dominates_the_unrestricted_one() {
    let o = opts();
    for seed in 0..15 {
        let m = build_random_ssp(4, 2, (0.0, 1.0), 0.3, seed).unwrap();
        let over_regular = opt_over_regular(&m, &all_real(&m, seed), &o).unwrap();
        let unrestricted = restricted_opt_cost(
            &m,
            &PairSetDescriptor::AllPairs,
            &RestrictedOptOptions {
                enumeration_limit: o.enumeration_limit,
                cost: o.cost.clone(),
            },
        )
        .unwrap();
        for x in 0..m.n_states() {
            assert!(
                le_with_tol(unrestricted[x], over_regular[x], 1e-9),
                "seed {seed}, state {x}: {:?} > {:?}",
                unrestricted[x],
                over_regular[x]
            );
        }
    }
}

#[test]
fn bellman_subsolutions_stay_below_the_restricted_optimum() {
    let o = opts();
    for seed in 0..12 {
        let m = build_nonneg_mdp(4, 2, seed).unwrap();
        let over_regular = opt_over_regular(&m, &all_real(&m, seed), &o).unwrap();

        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        let mut draws = vec![
            CostFunction::zeros(m.n_states()),
            CostFunction::constant(m.n_states(), Finite(-1.0)),
        ];
        for _ in 0..8 {
            let values: Vec<f64> = (0..m.n_states()).map(|_| rng.gen_range(-2.0..2.0)).collect();
            draws.push(CostFunction::from_reals(&values));
        }
        // Stop coordinates carry through T unchanged, so only the zero
        // slice can be compared against costs that are zero there.
        for j in &mut draws {
            for &x in m.stop_set() {
                j.set(x, Finite(0.0));
            }
        }

        let mut kept = 0;
        for j in draws {
            let (tj, _) = m.apply_t(&j);
            let subsolution = (0..m.n_states()).all(|x| le_with_tol(j[x], tj[x], 1e-9));
            if !subsolution {
                continue;
            }
            kept += 1;
            for x in 0..m.n_states() {
                assert!(
                    le_with_tol(j[x], over_regular[x], 1e-9),
                    "seed {seed}, state {x}: subsolution exceeds the optimum"
                );
            }
        }
        assert!(kept >= 2, "seed {seed}: sampling was vacuous");
    }
}

#[test]
fn fixed_points_in_the_well_behaved_region_match_the_optimum() {
    let o = opts();

    for (a, b) in [(0.0, 3.0), (1.0, 5.0)] {
        let m = build_detsp(DetSpParams { a, b });
        let region = all_real(&m, 3);
        let w = well_behaved_region(&m, &region, &o).unwrap();
        let best = w.lower().clone();
        assert!(m.apply_t(&best).0.sup_distance(&best) <= Finite(1e-9));

        let grids = vec![uniform_grid(-5.0, 5.0, 0.5), vec![0.0]];
        let hits: Vec<CostFunction> = fixed_point_scan(&m, &grids, 1e-9)
            .unwrap()
            .into_iter()
            .filter(|j| w.contains(j))
            .collect();
        assert!(!hits.is_empty(), "({a}, {b}): scan missed the optimum");
        for j in hits {
            assert!(j.approx_eq(&best, 1e-6), "({a}, {b}): stray fixed point");
        }
    }

    for seed in 0..8 {
        let m = build_random_ssp(4, 2, (0.0, 1.0), 0.3, seed).unwrap();
        let region = all_real(&m, seed);
        let w = well_behaved_region(&m, &region, &o).unwrap();
        let best = w.lower().clone();
        if m.apply_t(&best).0.sup_distance(&best) > Finite(1e-8) {
            // Without an independent fixed-point confirmation the scan
            // has no ground truth to compare against.
            continue;
        }

        let grids = offset_grids(&m, &best);
        let hits: Vec<CostFunction> = fixed_point_scan(&m, &grids, 1e-6)
            .unwrap()
            .into_iter()
            .filter(|j| w.contains(j))
            .collect();
        assert!(!hits.is_empty(), "seed {seed}: scan missed the optimum");
        for j in hits {
            assert!(j.approx_eq(&best, 1e-5), "seed {seed}: stray fixed point");
        }
    }
}

#[test]
fn strong_conditions_plus_scanned_fixed_point_pin_the_optimum() {
    let o = opts();

    let m = build_detsp(DetSpParams { a: 1.0, b: 5.0 });
    let region = all_real(&m, 3);
    let report = check_strong_pi_conditions(&m, &region, 1e3, &o).unwrap();
    assert!(report.holds);
    let best = opt_over_regular(&m, &region, &o).unwrap();
    let grids = vec![uniform_grid(-5.0, 5.0, 0.5), vec![0.0]];
    let hits = fixed_point_scan(&m, &grids, 1e-9).unwrap();
    assert_eq!(hits.len(), 1);
    assert!(hits[0].approx_eq(&best, 1e-6));

    let mut holding = 0;
    for seed in 0..6 {
        let m = build_random_ssp(4, 2, (0.0, 1.0), 0.3, seed).unwrap();
        let region = all_real(&m, seed);
        let report = check_strong_pi_conditions(&m, &region, 1e3, &o).unwrap();
        if !report.holds {
            continue;
        }
        holding += 1;
        let best = opt_over_regular(&m, &region, &o).unwrap();
        let grids = offset_grids(&m, &best);
        for j in fixed_point_scan(&m, &grids, 1e-6).unwrap() {
            assert!(
                j.approx_eq(&best, 1e-5),
                "seed {seed}: fixed point away from the optimum"
            );
        }
    }
    assert!(holding >= 3, "conditions held on too few models: {holding}");
}
