//! Parameter sweeps over η, the interferometer phase, and the photon number.
//!
//! Rows are evaluated in parallel but always returned in input-grid order.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::etastate::{eta_state, normalization_c_sq, ratio_sq_pair, EtaParams};
use crate::metrics::SensitivityReport;
use crate::schwinger::{expectation, JOperatorSet};

/// One η of an η sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EtaScanRow {
    pub eta: f64,
    pub j1_mean: f64,
    pub dj2_sq: f64,
    pub dj3_sq: f64,
    pub delta_phi_sq: f64,
    pub q: Option<f64>,
    pub crb: f64,
    pub squeeze_ratio: f64,
    pub mean_pair_photons: f64,
    pub c_n_sq: f64,
    /// `gamma -> 0` limit of `P_sq / P_pair`; `None` at `eta = 0`.
    pub ratio_sq_pair: Option<f64>,
}

impl EtaScanRow {
    pub fn compute(params: EtaParams, ops: &JOperatorSet) -> Result<Self> {
        let report = SensitivityReport::for_eta(params, ops)?;
        let ratio = if params.eta > 0.0 {
            Some(ratio_sq_pair(params)?.0)
        } else {
            None
        };
        Ok(Self {
            eta: params.eta,
            j1_mean: report.j1_mean,
            dj2_sq: report.dj2_sq,
            dj3_sq: report.dj3_sq,
            delta_phi_sq: report.delta_phi_sq,
            q: report.q,
            crb: report.crb,
            squeeze_ratio: report.squeeze_ratio,
            mean_pair_photons: report.mean_pair_photons,
            c_n_sq: normalization_c_sq(params),
            ratio_sq_pair: ratio,
        })
    }
}

/// `lo, lo + step, ...` up to and including `hi` (within rounding).
pub fn uniform_grid(lo: f64, hi: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0 && hi >= lo && lo.is_finite() && hi.is_finite()) {
        return Err(Error::Domain("grid needs finite lo <= hi and step > 0"));
    }
    let count = ((hi - lo) / step + 1e-9).floor() as usize;
    Ok((0..=count).map(|i| lo + i as f64 * step).collect())
}

pub fn eta_scan(n_total: usize, eta_grid: &[f64]) -> Result<Vec<EtaScanRow>> {
    let ops = JOperatorSet::new(n_total)?;
    eta_grid
        .par_iter()
        .map(|&eta| EtaScanRow::compute(EtaParams::new(n_total, eta)?, &ops))
        .collect()
}

/// Output statistics at one interferometer phase.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhaseScanRow {
    pub phi: f64,
    /// Probabilities of `J2 = m` for `m = -N/2, ..., N/2`.
    pub probabilities: Vec<f64>,
    pub mean_j2: f64,
}

/// `intervals` equally spaced phases covering `[0, 2 pi)`.
pub fn default_phase_grid(intervals: usize) -> Vec<f64> {
    (0..intervals)
        .map(|i| i as f64 * std::f64::consts::TAU / intervals as f64)
        .collect()
}

/// Phase grid used for the photon-statistics contour plot: 20 steps of `pi/10`.
pub const DEFAULT_PHASE_INTERVALS: usize = 20;

pub fn phase_scan(n_total: usize, eta: f64, phi_grid: &[f64]) -> Result<Vec<PhaseScanRow>> {
    let ops = JOperatorSet::new(n_total)?;
    let state = eta_state(EtaParams::new(n_total, eta)?);
    // Force both spectra before fanning out.
    ops.j2_spectrum();
    ops.j3_spectrum();
    phi_grid
        .par_iter()
        .map(|&phi| {
            let probabilities = ops.output_distribution(&state, phi)?;
            let mean_j2 = expectation(&ops.rotated_j2(phi), &state)?;
            Ok(PhaseScanRow {
                phi,
                probabilities,
                mean_j2,
            })
        })
        .collect()
}

/// One cell of the generation-rate comparison table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Table1Row {
    pub n_total: usize,
    pub eta: f64,
    pub ratio_sq_pair: f64,
    pub ratio_stirling: f64,
    pub n_delta_phi_sq: f64,
    pub c_n_sq: f64,
}

pub const TABLE1_ETAS: [f64; 3] = [1.0 / 3.0, 0.5, 1.0];
pub const TABLE1_PHOTON_NUMBERS: [usize; 6] = [3, 4, 5, 6, 7, 8];

/// Rows ordered by photon number, then by η.
pub fn table1(eta_values: &[f64], photon_numbers: &[usize]) -> Result<Vec<Table1Row>> {
    let cells: Vec<(usize, f64)> = photon_numbers
        .iter()
        .flat_map(|&n| eta_values.iter().map(move |&eta| (n, eta)))
        .collect();
    cells
        .par_iter()
        .map(|&(n, eta)| {
            let params = EtaParams::new(n, eta)?;
            let ops = JOperatorSet::new(n)?;
            let report = SensitivityReport::for_eta(params, &ops)?;
            let (ratio, stirling) = ratio_sq_pair(params)?;
            Ok(Table1Row {
                n_total: n,
                eta,
                ratio_sq_pair: ratio,
                ratio_stirling: stirling,
                n_delta_phi_sq: n as f64 * report.delta_phi_sq,
                c_n_sq: normalization_c_sq(params),
            })
        })
        .collect()
}
