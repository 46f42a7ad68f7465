use nsqueeze::etastate::eta_state;
use nsqueeze::metrics::{minimize_over_eta, phase_error, optimal_phase_error, ETA_SEARCH};
use nsqueeze::scan::{default_phase_grid, eta_scan, phase_scan, uniform_grid};
use nsqueeze::{EtaParams, JOperatorSet};
use proptest::prelude::*;

#[test]
fn eta_scan_rows_are_consistent() {
    let grid = uniform_grid(0.0, 1.5, 0.005).unwrap();
    for n in [2, 5, 8, 13] {
        let nf = n as f64;
        for row in eta_scan(n, &grid).unwrap() {
            assert!(row.dj2_sq >= 0.0 && row.dj3_sq >= 0.0);
            assert!((row.delta_phi_sq - row.dj2_sq / (row.j1_mean * row.j1_mean)).abs() < 1e-12);
            assert!((row.crb - 0.25 / row.dj3_sq).abs() < 1e-12);
            assert!(1.0 / (nf * nf) <= row.crb * (1.0 + 1e-12));
            assert!(row.crb <= row.delta_phi_sq * (1.0 + 1e-12));
            assert!(row.c_n_sq > 0.0 && row.c_n_sq <= 1.0);
            assert!(row.ratio_sq_pair.map_or(row.eta == 0.0, |r| r > 0.0));
        }
    }
}

#[test]
fn phase_rows_are_consistent() {
    for n in [1, 4, 8] {
        for row in phase_scan(n, 0.85, &default_phase_grid(20)).unwrap() {
            assert!((row.probabilities.iter().sum::<f64>() - 1.0).abs() < 1e-10);
            let mean: f64 = row
                .probabilities
                .iter()
                .enumerate()
                .map(|(i, p)| (i as f64 - n as f64 / 2.0) * p)
                .sum();
            assert!((mean - row.mean_j2).abs() < 1e-10);
        }
    }
}

#[test]
fn sql_recovered_for_all_small_n() {
    for n in 1..=64 {
        let ops = JOperatorSet::new(n).unwrap();
        let state = eta_state(EtaParams::new(n, 0.0).unwrap());
        assert!((phase_error(&state, &ops).unwrap() - 1.0 / n as f64).abs() < 1e-12);
    }
}

#[test]
fn eight_photon_phase_error_is_unimodal() {
    let rows = eta_scan(8, &uniform_grid(0.0, 1.5, 0.005).unwrap()).unwrap();
    for pair in rows.windows(2) {
        let (a, b) = (&pair[0], &pair[1]);
        if b.eta <= 0.8 + 1e-9 {
            assert!(b.delta_phi_sq < a.delta_phi_sq, "eta {}", b.eta);
        }
        if a.eta >= 0.9 - 1e-9 {
            assert!(b.delta_phi_sq > a.delta_phi_sq, "eta {}", b.eta);
        }
    }
}

#[test]
fn eight_photon_optimum_near_geometric_mean() {
    let ops = JOperatorSet::new(8).unwrap();
    let best = optimal_phase_error(&ops).unwrap();
    assert!((8.0 * best.value - 0.346).abs() < 0.005);
    assert!(8.0 * best.value < 1.0 / 8f64.sqrt());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn halving_grid_step_keeps_optimum(n in 3usize..=16) {
        let ops = JOperatorSet::new(n).unwrap();
        let (lo, hi, step, tol) = ETA_SEARCH;
        let objective = |eta: f64| phase_error(&eta_state(EtaParams::new(n, eta)?), &ops);
        let coarse = minimize_over_eta(lo, hi, step, tol, objective).unwrap();
        let fine = minimize_over_eta(lo, hi, step / 2.0, tol, objective).unwrap();
        prop_assert!((coarse.eta - fine.eta).abs() < step);
    }

    #[test]
    fn scan_order_matches_grid(etas in prop::collection::vec(0.0..1.5f64, 1..20)) {
        let rows = eta_scan(6, &etas).unwrap();
        prop_assert_eq!(rows.iter().map(|r| r.eta).collect::<Vec<_>>(), etas);
    }
}
