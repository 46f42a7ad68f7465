#![allow(dead_code)]

pub mod oracle;

use nsqueeze::{Complex64, NPhotonState};
use proptest::prelude::*;

/// Random normalized state in a sector with `1..=max_n` photons.
pub fn arb_state(max_n: usize) -> impl Strategy<Value = NPhotonState> {
    (1..=max_n)
        .prop_flat_map(|n| prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), n + 1))
        .prop_filter_map("zero vector", |v| {
            NPhotonState::from_amplitudes(v.into_iter().map(|(re, im)| Complex64::new(re, im)).collect())
                .ok()
        })
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}
