//! Single-mode photon-number expansions and exact post-selection of the
//! N-photon sector of a two-mode product state.

use nalgebra::DVector;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest truncation accepted by the single-mode constructors.
pub const MAX_TRUNCATION: usize = 512;

/// Below this photon number factorials are evaluated exactly.
const EXACT_FACTORIAL_LIMIT: usize = 20;

/// `ln(n!)`, exact up to 20! and summed in log space beyond.
pub fn ln_factorial(n: usize) -> f64 {
    if n <= EXACT_FACTORIAL_LIMIT {
        return ((1..=n as u64).product::<u64>() as f64).ln();
    }
    ln_factorial(EXACT_FACTORIAL_LIMIT)
        + (EXACT_FACTORIAL_LIMIT + 1..=n)
            .map(|k| (k as f64).ln())
            .sum::<f64>()
}

/// Truncation used when a caller does not pick one: `max(4|alpha|^2 + 30, N + 10)`.
pub fn default_truncation(alpha_abs: f64, n_total: usize) -> usize {
    let from_alpha = (4.0 * alpha_abs * alpha_abs + 30.0).ceil() as usize;
    from_alpha.max(n_total + 10)
}

/// Photon-number amplitudes `0..=n_max` of one optical mode.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeAmplitudes {
    amps: Vec<Complex64>,
}

impl ModeAmplitudes {
    pub fn new(amps: Vec<Complex64>) -> Result<Self> {
        if amps.is_empty() {
            return Err(Error::InvalidState);
        }
        Ok(Self { amps })
    }

    pub fn n_max(&self) -> usize {
        self.amps.len() - 1
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn get(&self, n: usize) -> Complex64 {
        self.amps.get(n).copied().unwrap_or_default()
    }

    /// Retained probability, `<= 1` because of truncation.
    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn vacuum(n_max: usize) -> Self {
        let mut amps = vec![Complex64::default(); n_max + 1];
        amps[0] = Complex64::new(1.0, 0.0);
        Self { amps }
    }
}

fn check_truncation(n_max: usize) -> Result<()> {
    if n_max > MAX_TRUNCATION {
        return Err(Error::TruncationTooLarge {
            n_max,
            ceiling: MAX_TRUNCATION,
        });
    }
    Ok(())
}

/// Coherent state `|alpha>`: `e^{-|alpha|^2/2} alpha^n / sqrt(n!)`.
pub fn coherent_amplitudes(alpha: Complex64, n_max: usize) -> Result<ModeAmplitudes> {
    check_truncation(n_max)?;
    if !(alpha.re.is_finite() && alpha.im.is_finite()) {
        return Err(Error::InvalidAlpha(alpha.norm()));
    }
    let r = alpha.norm();
    let theta = alpha.arg();
    let amps = (0..=n_max)
        .map(|n| {
            if r == 0.0 {
                return if n == 0 {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::default()
                };
            }
            let ln_mag = -0.5 * r * r + n as f64 * r.ln() - 0.5 * ln_factorial(n);
            Complex64::from_polar(ln_mag.exp(), n as f64 * theta)
        })
        .collect();
    Ok(ModeAmplitudes { amps })
}

/// Real-amplitude convenience wrapper around [`coherent_amplitudes`].
pub fn coherent_amplitudes_real(alpha: f64, n_max: usize) -> Result<ModeAmplitudes> {
    coherent_amplitudes(Complex64::new(alpha, 0.0), n_max)
}

/// Squeezed vacuum annihilated by `b + gamma b^dagger`:
/// `amps[2k] = (1-gamma^2)^{1/4} (-gamma)^k sqrt((2k)!) / (2^k k!)`, odd terms zero.
pub fn squeezed_vacuum_amplitudes(gamma: f64, n_max: usize) -> Result<ModeAmplitudes> {
    check_truncation(n_max)?;
    if !(0.0..1.0).contains(&gamma) {
        return Err(Error::InvalidGamma(gamma));
    }
    if gamma == 0.0 {
        return Ok(ModeAmplitudes::vacuum(n_max));
    }
    let ln_norm = 0.25 * (1.0 - gamma * gamma).ln();
    let amps = (0..=n_max)
        .map(|n| {
            if n % 2 == 1 {
                return Complex64::default();
            }
            let k = n / 2;
            let ln_mag = ln_norm + k as f64 * gamma.ln() + 0.5 * ln_factorial(2 * k)
                - k as f64 * std::f64::consts::LN_2
                - ln_factorial(k);
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            Complex64::new(sign * ln_mag.exp(), 0.0)
        })
        .collect();
    Ok(ModeAmplitudes { amps })
}

/// Normalized state of the N-photon sector in the basis `|N-k; k>`.
///
/// The global phase is fixed so that `c_0` is real and non-negative whenever
/// it is nonzero.
#[derive(Debug, Clone, PartialEq)]
pub struct NPhotonState {
    amps: DVector<Complex64>,
}

impl NPhotonState {
    /// Normalizes `amps` and applies the global-phase convention.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        Self::from_vector(DVector::from_vec(amps))
    }

    pub fn from_vector(mut amps: DVector<Complex64>) -> Result<Self> {
        if amps.len() < 2 {
            return Err(Error::InvalidState);
        }
        let norm = amps.norm();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::InvalidState);
        }
        let c0 = amps[0];
        let phase = if c0.norm() > 0.0 {
            c0.conj() / c0.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        amps *= phase / norm;
        // c_0 is real by construction; drop the rounding residue.
        amps[0] = Complex64::new(amps[0].norm(), 0.0);
        Ok(Self { amps })
    }

    /// `|N; 0>`: every photon in mode `a`.
    pub fn all_in_mode_a(n_total: usize) -> Result<Self> {
        if n_total == 0 {
            return Err(Error::InvalidState);
        }
        let mut amps = vec![Complex64::default(); n_total + 1];
        amps[0] = Complex64::new(1.0, 0.0);
        Self::from_amplitudes(amps)
    }

    pub fn n_total(&self) -> usize {
        self.amps.len() - 1
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amps
    }

    /// Amplitude of `|N-k; k>`.
    pub fn amplitude(&self, k: usize) -> Complex64 {
        self.amps[k]
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|c| c.norm_sqr()).collect()
    }

    pub fn norm(&self) -> f64 {
        self.amps.norm()
    }
}

/// Projects the product state `a ⊗ b` onto the sector with `n_total` photons.
///
/// Returns the normalized sector state and the probability of the sector.
pub fn post_select_n(
    a: &ModeAmplitudes,
    b: &ModeAmplitudes,
    n_total: usize,
) -> Result<(NPhotonState, f64)> {
    for mode in [a, b] {
        if n_total > mode.n_max() {
            return Err(Error::SectorBeyondTruncation {
                n: n_total,
                n_max: mode.n_max(),
            });
        }
    }
    if n_total == 0 {
        return Err(Error::InvalidState);
    }
    let sector: Vec<Complex64> = (0..=n_total)
        .map(|k| a.get(n_total - k) * b.get(k))
        .collect();
    let probability: f64 = sector.iter().map(|u| u.norm_sqr()).sum();
    if probability <= 0.0 || !probability.is_finite() {
        return Err(Error::EmptySector(n_total));
    }
    let state = NPhotonState::from_amplitudes(sector)?;
    Ok((state, probability))
}

/// Approximate probability of an N-photon pair state from down-conversion
/// alone, `(1 - gamma^2) gamma^N`. Applied to odd `N` as well.
pub fn pair_generation_probability(gamma: f64, n_total: usize) -> Result<f64> {
    if !(0.0..1.0).contains(&gamma) {
        return Err(Error::InvalidGamma(gamma));
    }
    if n_total < 2 {
        return Err(Error::Domain("pair generation needs N >= 2"));
    }
    Ok((1.0 - gamma * gamma) * gamma.powi(n_total as i32))
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOL: f64 = 1e-12;

    #[test]
    fn ln_factorial_matches_direct_product() {
        for n in 0..=25usize {
            let direct: f64 = (1..=n).map(|k| k as f64).product();
            assert!((ln_factorial(n) - direct.ln()).abs() < 1e-12, "n = {n}");
        }
        // Stirling series to three terms is accurate to ~1e-10 at n = 200.
        let n = 200.0f64;
        let stirling = n * n.ln() - n + 0.5 * (2.0 * std::f64::consts::PI * n).ln() + 1.0 / (12.0 * n)
            - 1.0 / (360.0 * n.powi(3));
        assert!((ln_factorial(200) - stirling).abs() < 1e-9);
    }

    #[test]
    fn coherent_vacuum_limit() {
        let m = coherent_amplitudes_real(0.0, 4).unwrap();
        assert_eq!(m.amps()[0], Complex64::new(1.0, 0.0));
        assert!(m.amps()[1..].iter().all(|a| *a == Complex64::default()));
    }

    #[test]
    fn coherent_alpha_one_second_component() {
        let m = coherent_amplitudes_real(1.0, 4).unwrap();
        assert!((m.amps()[2].re - 0.428_881_942_480_353_4).abs() < TOL);
        assert_eq!(m.amps()[2].im, 0.0);
    }

    #[test]
    fn coherent_normalization() {
        let m = coherent_amplitudes_real(0.5, 8).unwrap();
        assert!((m.norm_sqr() - 1.0).abs() < 1e-10);
        let m = coherent_amplitudes_real(0.5, 30).unwrap();
        assert!((m.norm_sqr() - 1.0).abs() < TOL);
        let alpha = 3.0;
        let m = coherent_amplitudes_real(alpha, default_truncation(alpha, 8)).unwrap();
        assert!((m.norm_sqr() - 1.0).abs() < TOL);
    }

    #[test]
    fn coherent_large_truncation_does_not_overflow() {
        let m = coherent_amplitudes_real(10.0, MAX_TRUNCATION).unwrap();
        assert!(m.amps().iter().all(|a| a.re.is_finite()));
        assert!((m.norm_sqr() - 1.0).abs() < TOL);
    }

    #[test]
    fn truncation_ceiling_rejected() {
        assert!(matches!(
            coherent_amplitudes_real(1.0, MAX_TRUNCATION + 1),
            Err(Error::TruncationTooLarge { .. })
        ));
        assert!(squeezed_vacuum_amplitudes(0.1, MAX_TRUNCATION + 1).is_err());
    }

    #[test]
    fn squeezed_vacuum_values() {
        let m = squeezed_vacuum_amplitudes(0.0, 6).unwrap();
        assert_eq!(m, ModeAmplitudes::vacuum(6));

        let m = squeezed_vacuum_amplitudes(0.1, 6).unwrap();
        // -(0.99)^{1/4} * 0.1 / sqrt(2)
        assert!((m.amps()[2].re + 0.070_533_234_616_974).abs() < TOL);
        assert!((m.amps()[2].re + 0.1 / 2f64.sqrt()).abs() < 2e-4);
    }

    #[test]
    fn squeezed_vacuum_parity_and_normalization() {
        for gamma in [0.05, 0.3, 0.6] {
            let m = squeezed_vacuum_amplitudes(gamma, 200).unwrap();
            assert!(m.amps().iter().skip(1).step_by(2).all(|a| *a == Complex64::default()));
            assert!((m.norm_sqr() - 1.0).abs() < TOL, "gamma = {gamma}");
        }
    }

    #[test]
    fn squeezed_vacuum_weak_limit() {
        for gamma in [1e-3, 5e-4, 1e-5] {
            let m = squeezed_vacuum_amplitudes(gamma, 4).unwrap();
            assert!((m.amps()[2].re + gamma / 2f64.sqrt()).abs() < gamma.powi(3));
        }
    }

    #[test]
    fn squeezed_vacuum_rejects_unnormalizable_gamma() {
        assert_eq!(squeezed_vacuum_amplitudes(1.0, 4), Err(Error::InvalidGamma(1.0)));
        assert!(squeezed_vacuum_amplitudes(-0.1, 4).is_err());
    }

    #[test]
    fn post_select_vacuum_b_keeps_all_photons_in_a() {
        let a = coherent_amplitudes_real(0.7, 20).unwrap();
        let b = ModeAmplitudes::vacuum(20);
        for n in 1..=6 {
            let (state, _) = post_select_n(&a, &b, n).unwrap();
            assert!((state.amplitude(0) - Complex64::new(1.0, 0.0)).norm() < 1e-15);
            assert!((1..=n).all(|k| state.amplitude(k).norm() == 0.0));
        }
    }

    #[test]
    fn post_select_empty_sector() {
        let a = coherent_amplitudes_real(0.0, 10).unwrap();
        let b = squeezed_vacuum_amplitudes(0.0, 10).unwrap();
        assert_eq!(post_select_n(&a, &b, 3).unwrap_err(), Error::EmptySector(3));
    }

    #[test]
    fn post_select_beyond_truncation() {
        let a = coherent_amplitudes_real(0.5, 4).unwrap();
        let b = squeezed_vacuum_amplitudes(0.1, 10).unwrap();
        assert!(matches!(
            post_select_n(&a, &b, 5),
            Err(Error::SectorBeyondTruncation { .. })
        ));
    }

    #[test]
    fn post_selected_state_is_unit_norm_with_real_c0() {
        let a = coherent_amplitudes(Complex64::from_polar(0.3, 0.9), 20).unwrap();
        let b = squeezed_vacuum_amplitudes(0.02, 20).unwrap();
        let (state, p) = post_select_n(&a, &b, 6).unwrap();
        assert!((state.norm() - 1.0).abs() < TOL);
        assert!(state.amplitude(0).im == 0.0 && state.amplitude(0).re > 0.0);
        assert!(p > 0.0 && p < 1.0);
    }

    #[test]
    fn pair_probability_values() {
        assert_eq!(pair_generation_probability(0.0, 4).unwrap(), 0.0);
        assert!((pair_generation_probability(0.1, 4).unwrap() - 9.9e-5).abs() < 1e-18);
        assert!((pair_generation_probability(0.5, 2).unwrap() - 0.1875).abs() < 1e-15);
        assert!(pair_generation_probability(0.5, 3).is_ok());
        assert!(pair_generation_probability(1.0, 4).is_err());
        assert!(pair_generation_probability(0.1, 1).is_err());
    }
}
