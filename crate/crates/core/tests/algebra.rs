mod common;

use nalgebra::DMatrix;
use nsqueeze::metrics::{cramer_rao, phase_error};
use nsqueeze::schwinger::{expectation, variance};
use nsqueeze::{Complex64, JOperatorSet};
use proptest::prelude::*;

use common::arb_state;

fn max_entry(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn commutator(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    a * b - b * a
}

const I: Complex64 = Complex64::new(0.0, 1.0);

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn su2_commutation_relations(n in 1usize..=64) {
        let ops = JOperatorSet::new(n).unwrap();
        let (j1, j2, j3) = (ops.j1(), ops.j2(), ops.j3());
        prop_assert!(max_entry(&(commutator(j1, j2) - j3 * I)) < 1e-12);
        prop_assert!(max_entry(&(commutator(j2, j3) - j1 * I)) < 1e-12);
        prop_assert!(max_entry(&(commutator(j3, j1) - j2 * I)) < 1e-12);
    }

    #[test]
    fn casimir_is_scalar(n in 1usize..=64) {
        let ops = JOperatorSet::new(n).unwrap();
        let j = n as f64 / 2.0;
        let casimir = ops.j1() * ops.j1() + ops.j2() * ops.j2() + ops.j3() * ops.j3();
        let expected = DMatrix::<Complex64>::identity(n + 1, n + 1) * Complex64::from(j * (j + 1.0));
        prop_assert!(max_entry(&(casimir - expected)) < 1e-10);
    }

    #[test]
    fn j2_spectrum_is_ladder(n in 1usize..=32) {
        let ops = JOperatorSet::new(n).unwrap();
        let spec = ops.j2_spectrum();
        for (i, &ev) in spec.eigenvalues.iter().enumerate() {
            prop_assert!((ev - (i as f64 - n as f64 / 2.0)).abs() < 1e-10);
        }
        prop_assert!(max_entry(&(spec.reconstruct() - ops.j2())) < 1e-10);
    }

    #[test]
    fn heisenberg_and_schroedinger_rotations_agree(
        psi in arb_state(32),
        phi in -std::f64::consts::PI..std::f64::consts::PI,
    ) {
        let ops = JOperatorSet::new(psi.n_total()).unwrap();
        let heisenberg = expectation(&ops.rotated_j2(phi), &psi).unwrap();
        let rotated = ops.rotate(&psi, phi).unwrap();
        let schroedinger = expectation(ops.j2(), &rotated).unwrap();
        prop_assert!((heisenberg - schroedinger).abs() < 1e-10);
        prop_assert!((rotated.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn phase_derivative_of_j2_is_j1(psi in arb_state(32)) {
        let ops = JOperatorSet::new(psi.n_total()).unwrap();
        let h = 1e-4;
        let at = |phi: f64| expectation(ops.j2(), &ops.rotate(&psi, phi).unwrap()).unwrap();
        let derivative = (at(h) - at(-h)) / (2.0 * h);
        let j1 = expectation(ops.j1(), &psi).unwrap();
        prop_assert!((derivative - j1).abs() < 1e-6, "{derivative} vs {j1}");
    }

    #[test]
    fn output_distribution_is_normalized(
        psi in arb_state(32),
        phi in 0.0..std::f64::consts::TAU,
    ) {
        let ops = JOperatorSet::new(psi.n_total()).unwrap();
        let p = ops.output_distribution(&psi, phi).unwrap();
        prop_assert_eq!(p.len(), psi.n_total() + 1);
        prop_assert!(p.iter().all(|&x| (0.0..=1.0 + 1e-12).contains(&x)));
        prop_assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-10);
        let mean: f64 = ops.j2_outcomes().iter().zip(&p).map(|(m, q)| m * q).sum();
        let direct = expectation(&ops.rotated_j2(phi), &psi).unwrap();
        prop_assert!((mean - direct).abs() < 1e-10);
    }

    #[test]
    fn sensitivity_ordering_chain(psi in arb_state(24)) {
        let ops = JOperatorSet::new(psi.n_total()).unwrap();
        let n = psi.n_total() as f64;
        let j1 = expectation(ops.j1(), &psi).unwrap();
        prop_assume!(j1.abs() > 1e-3 && variance(ops.j3(), &psi).unwrap() > 1e-6);
        let crb = cramer_rao(&psi, &ops).unwrap();
        let dphi = phase_error(&psi, &ops).unwrap();
        prop_assert!(1.0 / (n * n) <= crb * (1.0 + 1e-12));
        prop_assert!(crb <= dphi * (1.0 + 1e-12));
    }

    #[test]
    fn variances_bounded_by_spin(psi in arb_state(24)) {
        let ops = JOperatorSet::new(psi.n_total()).unwrap();
        let j = psi.n_total() as f64 / 2.0;
        let total = variance(ops.j1(), &psi).unwrap()
            + variance(ops.j2(), &psi).unwrap()
            + variance(ops.j3(), &psi).unwrap();
        prop_assert!(total >= j - 1e-10);
        prop_assert!(total <= j * (j + 1.0) + 1e-10);
    }
}
