//! Phase-sensitivity figures of merit for the linear `J2` estimator.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::etastate::{eta_state, mean_pair_photons, EtaParams};
use crate::fock::NPhotonState;
use crate::schwinger::{expectation, variance, JOperatorSet};

/// All scalar metrics of one state at the `phi = 0` operating point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SensitivityReport {
    pub n_total: usize,
    pub eta: Option<f64>,
    pub j1_mean: f64,
    pub dj2_sq: f64,
    pub dj3_sq: f64,
    /// Squared radians.
    pub delta_phi_sq: f64,
    /// `None` for `N = 1`, where the logarithmic scale is degenerate.
    pub q: Option<f64>,
    /// `1 / (4 dJ3^2)`, squared radians.
    pub crb: f64,
    /// `dJ2 / dJ3`, the squeezing factor `e^{-2r}`.
    pub squeeze_ratio: f64,
    pub mean_pair_photons: f64,
}

impl SensitivityReport {
    pub fn compute(state: &NPhotonState, ops: &JOperatorSet, eta: Option<f64>) -> Result<Self> {
        let j1_mean = expectation(ops.j1(), state)?;
        let dj2_sq = variance(ops.j2(), state)?;
        let dj3_sq = variance(ops.j3(), state)?;
        let delta_phi_sq = phase_error_from_moments(dj2_sq, j1_mean)?;
        let crb = cramer_rao_from_variance(dj3_sq)?;
        let n = ops.n_total();
        Ok(Self {
            n_total: n,
            eta,
            j1_mean,
            dj2_sq,
            dj3_sq,
            delta_phi_sq,
            q: (n >= 2).then(|| q_enhancement(n, delta_phi_sq)).transpose()?,
            crb,
            squeeze_ratio: (dj2_sq.max(0.0) / dj3_sq).sqrt(),
            mean_pair_photons: mean_pair_photons(state, ops)?,
        })
    }

    /// Report for the η-state with the given parameters.
    pub fn for_eta(params: EtaParams, ops: &JOperatorSet) -> Result<Self> {
        Self::compute(&eta_state(params), ops, Some(params.eta))
    }
}

fn phase_error_from_moments(dj2_sq: f64, j1_mean: f64) -> Result<f64> {
    if j1_mean.abs() < 1e-14 {
        return Err(Error::UndefinedEstimator);
    }
    Ok(dj2_sq / (j1_mean * j1_mean))
}

fn cramer_rao_from_variance(dj3_sq: f64) -> Result<f64> {
    if dj3_sq <= 1e-15 {
        return Err(Error::ZeroGeneratorVariance);
    }
    Ok(1.0 / (4.0 * dj3_sq))
}

/// `dphi^2 = dJ2^2 / <J1>^2`.
pub fn phase_error(state: &NPhotonState, ops: &JOperatorSet) -> Result<f64> {
    phase_error_from_moments(variance(ops.j2(), state)?, expectation(ops.j1(), state)?)
}

/// `Q = ln(1 / (N dphi^2)) / ln N`: 0 at the shot-noise limit, 1 at the
/// Heisenberg limit.
pub fn q_enhancement(n_total: usize, delta_phi_sq: f64) -> Result<f64> {
    if n_total < 2 {
        return Err(Error::Domain("Q needs N >= 2"));
    }
    if delta_phi_sq.is_nan() || delta_phi_sq <= 0.0 {
        return Err(Error::Domain("Q needs a positive phase error"));
    }
    let n = n_total as f64;
    Ok((1.0 / (n * delta_phi_sq)).ln() / n.ln())
}

/// Quantum Cramér-Rao bound of the phase generator, `1 / (4 dJ3^2)`.
pub fn cramer_rao(state: &NPhotonState, ops: &JOperatorSet) -> Result<f64> {
    cramer_rao_from_variance(variance(ops.j3(), state)?)
}

/// Small-η predictions and the limits of interferometric squeezing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SqueezingPredictions {
    /// `(1 - eta) / (1 + eta)`; `None` when `eta >= 1`.
    pub squeeze_ratio: Option<f64>,
    /// `eta^2 / (1 - eta^2)`; `None` when `eta >= 1`.
    pub mean_pair_photons: Option<f64>,
    /// Whether `1 - eta > 1/sqrt(2N)`.
    pub valid: bool,
    /// Largest η satisfying the validity condition, `1 - 1/sqrt(2N)`.
    pub validity_threshold: f64,
    /// `sqrt(N/2)`, bound on the pair photon number.
    pub pair_photon_bound: f64,
    /// `(2N)^{-3/2}`, estimated floor of the phase error.
    pub phase_error_floor: f64,
}

pub fn squeezing_predictions(n_total: usize, eta: f64) -> Result<SqueezingPredictions> {
    if n_total == 0 {
        return Err(Error::Domain("N must be positive"));
    }
    if !(eta >= 0.0 && eta.is_finite()) {
        return Err(Error::Domain("eta must be finite and non-negative"));
    }
    let n = n_total as f64;
    let validity_threshold = 1.0 - 1.0 / (2.0 * n).sqrt();
    let in_range = eta < 1.0;
    Ok(SqueezingPredictions {
        squeeze_ratio: in_range.then(|| (1.0 - eta) / (1.0 + eta)),
        mean_pair_photons: in_range.then(|| eta * eta / (1.0 - eta * eta)),
        valid: in_range && eta < validity_threshold,
        validity_threshold,
        pair_photon_bound: (n / 2.0).sqrt(),
        phase_error_floor: (2.0 * n).powf(-1.5),
    })
}

/// First-order `Q ~ 2 (N-1) / ln N * eta / N`, valid for small η.
pub fn weak_limit_q(n_total: usize, eta: f64) -> Result<f64> {
    if n_total < 2 {
        return Err(Error::Domain("Q needs N >= 2"));
    }
    let n = n_total as f64;
    Ok(2.0 * (n - 1.0) / n.ln() * eta / n)
}

/// `Q` implied by the squeezing factor `(1 - eta)/(1 + eta)` with
/// `<J1> = N/2`, i.e. `ln((1 + eta)/(1 - eta)) / ln N`.
pub fn squeezing_factor_q(n_total: usize, eta: f64) -> Result<f64> {
    if n_total < 2 {
        return Err(Error::Domain("Q needs N >= 2"));
    }
    if !(0.0..1.0).contains(&eta) {
        return Err(Error::Domain("squeezing-factor Q requires 0 <= eta < 1"));
    }
    Ok(((1.0 + eta) / (1.0 - eta)).ln() / (n_total as f64).ln())
}

/// Location and value of an extremum found by [`minimize_over_eta`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EtaOptimum {
    pub eta: f64,
    pub value: f64,
}

/// Coarse grid over `[lo, hi]` followed by golden-section refinement of the
/// best bracket down to a width of `tol`.
pub fn minimize_over_eta(
    lo: f64,
    hi: f64,
    step: f64,
    tol: f64,
    mut f: impl FnMut(f64) -> Result<f64>,
) -> Result<EtaOptimum> {
    if !(hi > lo && step > 0.0 && tol > 0.0) {
        return Err(Error::Domain("invalid optimisation grid"));
    }
    let points = ((hi - lo) / step).round() as usize;
    let mut best = EtaOptimum {
        eta: lo,
        value: f(lo)?,
    };
    for i in 1..=points {
        let eta = (lo + i as f64 * step).min(hi);
        let value = f(eta)?;
        if value < best.value {
            best = EtaOptimum { eta, value };
        }
    }

    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = ((best.eta - step).max(lo), (best.eta + step).min(hi));
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c)?, f(d)?);
    while b - a > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d)?;
        }
    }
    let eta = 0.5 * (a + b);
    let refined = EtaOptimum { eta, value: f(eta)? };
    Ok(if refined.value <= best.value { refined } else { best })
}

/// Grid used for η optimisation: `[0, 1.5]` in steps of 0.005, refined to 1e-4.
pub const ETA_SEARCH: (f64, f64, f64, f64) = (0.0, 1.5, 0.005, 1e-4);

/// η-state with the smallest phase error for `N` photons.
pub fn optimal_phase_error(ops: &JOperatorSet) -> Result<EtaOptimum> {
    let n = ops.n_total();
    let (lo, hi, step, tol) = ETA_SEARCH;
    minimize_over_eta(lo, hi, step, tol, |eta| {
        phase_error(&eta_state(EtaParams::new(n, eta)?), ops)
    })
}

/// η-state with the largest `Q` for `N` photons.
pub fn maximal_q(ops: &JOperatorSet) -> Result<EtaOptimum> {
    let n = ops.n_total();
    let (lo, hi, step, tol) = ETA_SEARCH;
    let opt = minimize_over_eta(lo, hi, step, tol, |eta| {
        let dphi = phase_error(&eta_state(EtaParams::new(n, eta)?), ops)?;
        Ok(-q_enhancement(n, dphi)?)
    })?;
    Ok(EtaOptimum {
        eta: opt.eta,
        value: -opt.value,
    })
}
