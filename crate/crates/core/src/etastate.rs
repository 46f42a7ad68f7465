//! The N-photon component of coherent light mixed with a squeezed vacuum.
//!
//! For a coherent amplitude `alpha` and down-conversion amplitude `gamma` the
//! post-selected N-photon state depends on the single parameter
//! `eta = N gamma / alpha^2`:
//!
//! ```text
//! |eta> = C_N sum_k (-1)^k / k! sqrt((2k)! N! / (N-2k)!) (eta / 2N)^k |N-2k; 2k>
//! ```
//!
//! The alternating sign is inherited from the squeezed vacuum and is the sign
//! that reduces the `J2` noise.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::{ln_factorial, NPhotonState};
use crate::schwinger::{expectation, JOperatorSet};

/// Validated `(N, eta)` pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EtaParams {
    pub n_total: usize,
    pub eta: f64,
}

impl EtaParams {
    pub fn new(n_total: usize, eta: f64) -> Result<Self> {
        if n_total == 0 {
            return Err(Error::PhotonNumberOutOfRange {
                n: 0,
                ceiling: crate::schwinger::MAX_PHOTONS,
            });
        }
        let limit = 2.0 * n_total as f64;
        if !eta.is_finite() || eta < 0.0 || eta >= limit {
            return Err(Error::InvalidEta { eta, limit });
        }
        Ok(Self { n_total, eta })
    }

    /// From the physical inputs, `eta = N gamma / alpha^2`.
    pub fn from_inputs(alpha: f64, gamma: f64, n_total: usize) -> Result<Self> {
        Self::new(n_total, eta_from_inputs(alpha, gamma, n_total)?)
    }

    /// Expansion ratio `eta / 2N`, equal to `gamma / (2 alpha^2)`.
    fn ratio(&self) -> f64 {
        self.eta / (2.0 * self.n_total as f64)
    }
}

pub fn eta_from_inputs(alpha: f64, gamma: f64, n_total: usize) -> Result<f64> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::InvalidAlpha(alpha));
    }
    if !(0.0..1.0).contains(&gamma) {
        return Err(Error::InvalidGamma(gamma));
    }
    Ok(n_total as f64 * gamma / (alpha * alpha))
}

/// `ln` of the squared multiplicity `(2k)! N! / ((k!)^2 (N-2k)!)`.
fn ln_weight_sq(n: usize, k: usize) -> f64 {
    ln_factorial(2 * k) + ln_factorial(n) - 2.0 * ln_factorial(k) - ln_factorial(n - 2 * k)
}

/// Unnormalized amplitudes with `c_0 = 1`, indexed by `k` in `|N-k; k>`.
pub fn unnormalized_coefficients(params: EtaParams) -> Vec<f64> {
    let n = params.n_total;
    let x = params.ratio();
    let mut coeffs = vec![0.0; n + 1];
    coeffs[0] = 1.0;
    if x == 0.0 {
        return coeffs;
    }
    for k in 1..=n / 2 {
        let magnitude = (0.5 * ln_weight_sq(n, k) + k as f64 * x.ln()).exp();
        coeffs[2 * k] = if k % 2 == 0 { magnitude } else { -magnitude };
    }
    coeffs
}

/// The normalized η-state.
pub fn eta_state(params: EtaParams) -> NPhotonState {
    let amps = unnormalized_coefficients(params)
        .into_iter()
        .map(|c| Complex64::new(c, 0.0))
        .collect();
    NPhotonState::from_amplitudes(amps).expect("c_0 = 1 keeps the norm positive")
}

/// `|C_N|^2`, the weight of `|N; 0>` in the normalized η-state.
pub fn normalization_c_sq(params: EtaParams) -> f64 {
    1.0 / inverse_c_sq(params.n_total, params.ratio())
}

/// `1/|C_N|^2 = sum_k (2k)! N! / ((k!)^2 (N-2k)!) x^{2k}`.
fn inverse_c_sq(n: usize, x: f64) -> f64 {
    if x == 0.0 {
        return 1.0;
    }
    (0..=n / 2)
        .map(|k| (ln_weight_sq(n, k) + 2.0 * k as f64 * x.ln()).exp())
        .sum()
}

/// Relative residual of the operator relation satisfied by the η-state,
///
/// ```text
/// (1 + eta (N - b†b)/N) J2 |eta> = -i (1 - eta (N - b†b)/N) J3 |eta>
/// ```
///
/// i.e. `|LHS - RHS| / |LHS|`. The factor `-i` follows from the operator
/// identities `a†b = J2 + i J3` and `a b† = J2 - i J3`.
pub fn defining_relation_residual(
    state: &NPhotonState,
    eta: f64,
    ops: &JOperatorSet,
) -> Result<f64> {
    if state.dim() != ops.dim() {
        return Err(Error::DimensionMismatch {
            op: ops.dim(),
            state: state.dim(),
        });
    }
    let n = ops.n_total() as f64;
    let dim = ops.dim();
    let weight = |sign: f64| {
        DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            dim,
            (0..dim).map(|k| Complex64::new(1.0 + sign * eta * (n - k as f64) / n, 0.0)),
        ))
    };
    let psi = state.amplitudes();
    let lhs = weight(1.0) * (ops.j2() * psi);
    let rhs = weight(-1.0) * (ops.j3() * psi) * Complex64::new(0.0, -1.0);
    let scale = lhs.norm();
    if scale == 0.0 {
        return Ok((lhs - rhs).norm());
    }
    Ok((lhs - rhs).norm() / scale)
}

/// Exact `<b†b>` of a state.
pub fn mean_pair_photons(state: &NPhotonState, ops: &JOperatorSet) -> Result<f64> {
    expectation(ops.pair_number(), state)
}

/// Small-η estimate `<b†b> ~ eta^2 / (1 - eta^2)`.
pub fn approx_mean_pair_photons(eta: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&eta) {
        return Err(Error::Domain("pair-photon approximation requires 0 <= eta < 1"));
    }
    Ok(eta * eta / (1.0 - eta * eta))
}

/// Probability of detecting exactly N photons from `|alpha; gamma>`:
///
/// `sqrt(1 - gamma^2) e^{-alpha^2} alpha^{2N} / N! * (1/|C_N|^2)`.
pub fn generation_probability_sq(alpha: f64, gamma: f64, n_total: usize) -> Result<f64> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::InvalidAlpha(alpha));
    }
    if !(0.0..1.0).contains(&gamma) {
        return Err(Error::InvalidGamma(gamma));
    }
    let n = n_total as f64;
    let ln_prefactor = 0.5 * (1.0 - gamma * gamma).ln() - alpha * alpha + 2.0 * n * alpha.ln()
        - ln_factorial(n_total);
    let x = gamma / (2.0 * alpha * alpha);
    Ok(ln_prefactor.exp() * inverse_c_sq(n_total, x))
}

/// Ratio of squeezed-state to pair-state generation probabilities in the
/// `gamma -> 0` limit, returned as `(exact_limit, stirling)`:
///
/// - `exact_limit = (N/eta)^N / N! / |C_N|^2`
/// - `stirling = (e/eta)^N / sqrt(2 pi N) / |C_N|^2`
pub fn ratio_sq_pair(params: EtaParams) -> Result<(f64, f64)> {
    if params.eta == 0.0 {
        return Err(Error::Domain("pair-state ratio diverges at eta = 0"));
    }
    let n = params.n_total as f64;
    let inv_c = inverse_c_sq(params.n_total, params.ratio());
    let exact = (n * (n / params.eta).ln() - ln_factorial(params.n_total)).exp() * inv_c;
    let stirling = (n * (1.0 - params.eta.ln())).exp()
        / (2.0 * std::f64::consts::PI * n).sqrt()
        * inv_c;
    Ok((exact, stirling))
}

/// Generation statistics for a concrete source `(alpha, gamma)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GenerationStats {
    pub c_n_sq: f64,
    pub p_sq: f64,
    pub p_pair: f64,
    /// `gamma -> 0` limit of `p_sq / p_pair`.
    pub ratio: f64,
    pub ratio_stirling: f64,
}

impl GenerationStats {
    pub fn new(alpha: f64, gamma: f64, n_total: usize) -> Result<Self> {
        let params = EtaParams::from_inputs(alpha, gamma, n_total)?;
        let (ratio, ratio_stirling) = ratio_sq_pair(params)?;
        Ok(Self {
            c_n_sq: normalization_c_sq(params),
            p_sq: generation_probability_sq(alpha, gamma, n_total)?,
            p_pair: crate::fock::pair_generation_probability(gamma, n_total)?,
            ratio,
            ratio_stirling,
        })
    }
}

/// Reference basis for [`noon_fidelity`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NoonBasis {
    /// `(|N;0> + e^{i theta}|0;N>)/sqrt(2)` in the input modes.
    Input,
    /// The same superposition of the extreme `J3` eigenstates, i.e. all
    /// photons in one or the other interferometer path.
    Path,
}

/// `max_theta |<NOON_theta|psi>|^2`, which equals `(|c_first| + |c_last|)^2 / 2`
/// for the two reference kets of the chosen basis.
pub fn noon_fidelity(state: &NPhotonState, ops: &JOperatorSet, basis: NoonBasis) -> Result<f64> {
    if state.dim() != ops.dim() {
        return Err(Error::DimensionMismatch {
            op: ops.dim(),
            state: state.dim(),
        });
    }
    let (first, last) = match basis {
        NoonBasis::Input => (state.amplitude(0), state.amplitude(ops.n_total())),
        NoonBasis::Path => {
            let v = &ops.j3_spectrum().eigenvectors;
            let psi = state.amplitudes();
            (
                v.column(ops.n_total()).dotc(psi),
                v.column(0).dotc(psi),
            )
        }
    };
    Ok((first.norm() + last.norm()).powi(2) / 2.0)
}
