//! Property-level checks of the numeric layer: eigensolver convergence
//! order, Sturm oscillation counts, window handling, and the dual-rule
//! normalization cross-check.

use anharm_core::analytic::{solve_cross_l, solve_same_qn, AnsatzSolution};
use anharm_core::error::CoreError;
use anharm_core::oracle::{
    adaptive_integrate, doubling_integrate, fd_eigensolve, integration_window, norm_integral,
    verify, GaussLegendre, RadialGrid, ToleranceTier, CROSS_CHECK_RULE_ORDER, PRIMARY_RULE_ORDER,
};
use anharm_core::{ProblemSpec, StateLabel};

fn family(spec: &ProblemSpec) -> (anharm_core::PotentialParams, f64, f64) {
    let p = solve_same_qn(1.0, spec).unwrap();
    let ground = AnsatzSolution::ground(p, *spec, 1e-9).unwrap();
    let excited = AnsatzSolution::first_excited(p, *spec, 1e-9).unwrap();
    (p, ground.energy, excited.energy)
}

#[test]
fn eigensolver_reproduces_published_energies_3d() {
    let spec = ProblemSpec::three_d(0);
    let (p, e0, e1) = family(&spec);
    assert_eq!((e0, e1), (-2.0, 6.0));
    let grid = RadialGrid::new(0.15, 7.0, 4000).unwrap();
    let eig = fd_eigensolve(&p, &spec, &grid, 2).unwrap();
    let ext = eig.extrapolated.as_ref().unwrap();
    assert!((ext.eigenvalues[0] - e0).abs() < 1e-3, "E0 {}", ext.eigenvalues[0]);
    assert!((ext.eigenvalues[1] - e1).abs() < 1e-3, "E1 {}", ext.eigenvalues[1]);
    assert_eq!(eig.node_counts, vec![0, 1]);
    // excited node within one grid cell of the analytic root
    let analytic = 1.875f64.powf(0.25);
    let numeric = eig.node_radius(1, 0).unwrap();
    assert!(
        (numeric - analytic).abs() <= grid.spacing(),
        "node {numeric} vs {analytic}"
    );
}

#[test]
fn eigensolver_reproduces_published_energies_2d() {
    let spec = ProblemSpec::two_d(0);
    let (p, e0, e1) = family(&spec);
    assert_eq!((e0, e1), (-2.0, 6.0));
    let grid = RadialGrid::new(0.15, 7.0, 4000).unwrap();
    let eig = fd_eigensolve(&p, &spec, &grid, 2).unwrap();
    let ext = eig.extrapolated.as_ref().unwrap();
    assert!((ext.eigenvalues[0] - e0).abs() < 1e-3);
    assert!((ext.eigenvalues[1] - e1).abs() < 1e-3);
    assert_eq!(eig.node_counts, vec![0, 1]);
}

#[test]
fn numeric_ground_state_is_bound_below_zero() {
    for spec in [ProblemSpec::three_d(0), ProblemSpec::two_d(0)] {
        let (p, _, _) = family(&spec);
        let grid = RadialGrid::new(0.15, 7.0, 2000).unwrap();
        let eig = fd_eigensolve(&p, &spec, &grid, 1).unwrap();
        assert!(eig.eigenvalues[0] < 0.0, "{spec:?}: {}", eig.eigenvalues[0]);
    }
}

#[test]
fn eigenvalue_error_shrinks_at_second_order() {
    // halving h divides the error by ~4 for every admissible family
    for spec in [
        ProblemSpec::three_d(0),
        ProblemSpec::three_d(1),
        ProblemSpec::two_d(0),
        ProblemSpec::two_d(1),
    ] {
        let (p, e0, e1) = family(&spec);
        let mut errors: Vec<(f64, f64)> = Vec::new();
        let mut n = 250usize;
        for _ in 0..3 {
            let grid = RadialGrid::new(0.15, 7.0, n).unwrap();
            let eig = fd_eigensolve(&p, &spec, &grid, 2).unwrap();
            errors.push((eig.eigenvalues[0] - e0, eig.eigenvalues[1] - e1));
            n = 2 * n + 1;
        }
        for w in errors.windows(2) {
            for idx in 0..2 {
                let (coarse, fine) = match idx {
                    0 => (w[0].0, w[1].0),
                    _ => (w[0].1, w[1].1),
                };
                assert!(fine.abs() < coarse.abs(), "{spec:?}: |{fine}| !< |{coarse}|");
                let ratio = coarse / fine;
                assert!(
                    (3.6..=4.4).contains(&ratio),
                    "{spec:?} state {idx}: error ratio {ratio}"
                );
            }
        }
    }
}

#[test]
fn sturm_oscillation_numbers_the_states() {
    for spec in [ProblemSpec::three_d(0), ProblemSpec::two_d(0)] {
        let (p, _, _) = family(&spec);
        let grid = RadialGrid::new(0.15, 7.0, 3000).unwrap();
        let eig = fd_eigensolve(&p, &spec, &grid, 4).unwrap();
        assert_eq!(eig.node_counts, vec![0, 1, 2, 3], "{spec:?}");
        for w in eig.eigenvalues.windows(2) {
            assert!(w[0] < w[1]);
        }
    }
}

#[test]
fn coarse_grids_are_rejected_not_extrapolated() {
    let spec = ProblemSpec::three_d(0);
    let (p, _, _) = family(&spec);
    let grid = RadialGrid::new(0.15, 7.0, 16).unwrap();
    assert!(matches!(
        fd_eigensolve(&p, &spec, &grid, 2),
        Err(CoreError::GridTooCoarse(_))
    ));
}

#[test]
fn truncating_windows_are_rejected() {
    let spec = ProblemSpec::three_d(0);
    let (p, _, _) = family(&spec);
    for (lo, hi) in [(0.6, 7.0), (0.15, 2.0)] {
        let grid = RadialGrid::new(lo, hi, 4000).unwrap();
        assert!(
            matches!(fd_eigensolve(&p, &spec, &grid, 2), Err(CoreError::InvalidWindow(_))),
            "window [{lo}, {hi}] accepted"
        );
    }
}

#[test]
fn scaled_family_keeps_the_level_gap() {
    // E1 - E0 = 8 sqrt(a); at a = 4 the numeric gap must be 16 within 2e-3
    let spec = ProblemSpec::three_d(0);
    let p = solve_same_qn(4.0, &spec).unwrap();
    let grid = RadialGrid::for_params(&p, 4000).unwrap();
    let eig = fd_eigensolve(&p, &spec, &grid, 2).unwrap();
    let ext = eig.extrapolated.as_ref().unwrap();
    let gap = ext.eigenvalues[1] - ext.eigenvalues[0];
    assert!((gap - 16.0).abs() < 2e-3, "gap {gap}");
}

#[test]
fn normalization_two_rules_agree_to_1e8() {
    for spec in [ProblemSpec::three_d(0), ProblemSpec::two_d(0)] {
        let p = solve_same_qn(1.0, &spec).unwrap();
        let sol = AnsatzSolution::ground(p, spec, 1e-9).unwrap();
        let primary = norm_integral(&sol, 1e-10).unwrap().value;
        let (lo, hi) = integration_window(&sol, 40.0);
        let f = |r: f64| {
            let v = sol.eval(r).unwrap();
            v * v
        };
        let second = doubling_integrate(&f, lo, hi, 1e-11, &GaussLegendre::new(CROSS_CHECK_RULE_ORDER))
            .unwrap()
            .value;
        let rel = ((primary - second) / second).abs();
        assert!(rel < 1e-8, "{spec:?}: relative difference {rel}");
    }
}

#[test]
fn normalization_invariant_under_window_refinement() {
    let spec = ProblemSpec::three_d(0);
    let p = solve_same_qn(1.0, &spec).unwrap();
    let sol = AnsatzSolution::first_excited(p, spec, 1e-9).unwrap();
    let rule = GaussLegendre::new(PRIMARY_RULE_ORDER);
    let f = |r: f64| {
        let v = sol.eval(r).unwrap();
        v * v
    };
    let (lo40, hi40) = integration_window(&sol, 40.0);
    let base = adaptive_integrate(&f, lo40, hi40, 1e-12, &rule).unwrap().value;
    for drop in [60.0, 90.0] {
        let (lo, hi) = integration_window(&sol, drop);
        assert!(lo < lo40 && hi > hi40);
        let wider = adaptive_integrate(&f, lo, hi, 1e-12 * base, &rule).unwrap().value;
        let rel = ((wider - base) / base).abs();
        assert!(rel < 1e-10, "drop {drop}: relative change {rel}");
    }
}

#[test]
fn verify_passes_exact_families_and_fails_the_historical_candidate() {
    let spec = ProblemSpec::three_d(0);
    let (p, _, _) = family(&spec);
    let grid = RadialGrid::new(0.15, 7.0, 4000).unwrap();
    for sol in [
        AnsatzSolution::ground(p, spec, 1e-9).unwrap(),
        AnsatzSolution::first_excited(p, spec, 1e-9).unwrap(),
    ] {
        let rep = verify(&sol, &grid, ToleranceTier::Exact);
        assert!(rep.verdict(), "failing report: {rep:?}");
        assert!(rep.energy_delta.abs() < 1e-3);
    }

    let params = anharm_core::PotentialParams::new(1.0, 0.04082, 0.18).unwrap();
    let spec10 = ProblemSpec::three_d(0);
    let s = params.sqrt_c();
    let kappa1 = (params.b() + 7.0 * s) / (2.0 * s);
    let candidate = AnsatzSolution::candidate(
        StateLabel::FirstExcited,
        kappa1,
        12.09621,
        1.0,
        -0.1787,
        0.8485,
        params,
        spec10,
    );
    let grid10 = RadialGrid::for_params(&params, 4000).unwrap();
    let rep = verify(&candidate, &grid10, ToleranceTier::Rounded);
    assert!(!rep.verdict());
    assert!(!rep.residual_ok, "residual check must flag the candidate");
}

#[test]
fn verify_passes_cross_family_at_rounded_tier_from_printed_values() {
    let params = anharm_core::PotentialParams::new(1.0, -4.2011, 0.75878).unwrap();
    let spec = ProblemSpec::three_d_cross(0, 1).unwrap();
    let grid = RadialGrid::new(0.15, 7.0, 4000).unwrap();
    for sol in [
        AnsatzSolution::ground(params, spec, 1e-4).unwrap(),
        AnsatzSolution::first_excited(params, spec, 1e-4).unwrap(),
    ] {
        let rep = verify(&sol, &grid, ToleranceTier::Rounded);
        assert!(rep.verdict(), "failing report: {rep:?}");
    }
}

#[test]
fn verify_picks_the_excited_sector_by_node_count() {
    // the cross-qn excited state is the second state of its own sector
    let p = solve_cross_l(1.0, 0, 1).unwrap();
    let spec = ProblemSpec::three_d_cross(0, 1).unwrap();
    let sol = AnsatzSolution::first_excited(p, spec, 1e-9).unwrap();
    let grid = RadialGrid::for_params(&p, 4000).unwrap();
    let rep = verify(&sol, &grid, ToleranceTier::Exact);
    assert!(rep.verdict(), "failing report: {rep:?}");
    assert!(rep.energy_delta.abs() < 1e-3);
}
