//! Brute-force reference for the post-selected N-photon state.
//!
//! Both single-mode states are expanded term by term from their series
//! recurrences, multiplied out into the full truncated two-mode product, and
//! the N-photon sector is read off numerically. Nothing here goes through
//! the crate's Fock-space constructors or closed forms.

use nsqueeze::{Complex64, NPhotonState};

fn coherent_series(alpha: f64, n_max: usize) -> Vec<f64> {
    let mut amps = vec![0.0; n_max + 1];
    amps[0] = (-0.5 * alpha * alpha).exp();
    for n in 1..=n_max {
        amps[n] = amps[n - 1] * alpha / (n as f64).sqrt();
    }
    amps
}

// <2k|gamma> / <2k-2|gamma> = -gamma sqrt((2k)(2k-1)) / (2k)
fn squeezed_series(gamma: f64, n_max: usize) -> Vec<f64> {
    let mut amps = vec![0.0; n_max + 1];
    amps[0] = (1.0 - gamma * gamma).powf(0.25);
    for m in (2..=n_max).step_by(2) {
        let mf = m as f64;
        amps[m] = amps[m - 2] * -gamma * (mf * (mf - 1.0)).sqrt() / mf;
    }
    amps
}

/// Post-selected sector of `|alpha> ⊗ |gamma>` with `alpha^2 = N gamma / eta`.
///
/// Returns the normalized state and the sector probability.
pub fn brute_force_eta_state(
    n_total: usize,
    eta: f64,
    gamma: f64,
    n_max: usize,
) -> Result<(NPhotonState, f64), String> {
    if !(gamma > 0.0 && gamma <= 1e-2) {
        return Err(format!("gamma {gamma} outside (0, 1e-2]"));
    }
    if !(eta > 0.0 && eta.is_finite()) {
        return Err(format!("eta {eta} must be positive"));
    }
    if n_max < n_total + 10 {
        return Err(format!("n_max {n_max} < N + 10"));
    }
    let alpha = (n_total as f64 * gamma / eta).sqrt();
    let a = coherent_series(alpha, n_max);
    let b = squeezed_series(gamma, n_max);

    let dim = n_max + 1;
    let mut product = vec![0.0; dim * dim];
    for (i, ai) in a.iter().enumerate() {
        for (j, bj) in b.iter().enumerate() {
            product[i * dim + j] = ai * bj;
        }
    }

    let sector: Vec<f64> = (0..=n_total)
        .map(|k| product[(n_total - k) * dim + k])
        .collect();
    let probability: f64 = sector.iter().map(|u| u * u).sum();
    let norm = probability.sqrt();
    let sign = if sector[0] < 0.0 { -1.0 } else { 1.0 };
    let amps = sector
        .iter()
        .map(|u| Complex64::new(sign * u / norm, 0.0))
        .collect();
    let state = NPhotonState::from_amplitudes(amps).map_err(|e| e.to_string())?;
    Ok((state, probability))
}
