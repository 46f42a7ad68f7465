//! Two-mode Fock-space simulation of N-photon states produced by mixing weak
//! coherent light with parametric down-conversion, together with the
//! phase-sensitivity metrics of the resulting squeezed states in a
//! Mach-Zehnder interferometer.
//!
//! The N-photon sector is spanned by the kets `|N-k; k>`, `k = 0..=N`, where
//! `k` counts the photons in the down-conversion mode `b`. All states and
//! operators in this crate are expressed in that basis.

pub mod cli;
pub mod error;
pub mod etastate;
pub mod fock;
pub mod metrics;
pub mod scan;
pub mod schwinger;

pub use error::{Error, Result};
pub use etastate::{EtaParams, GenerationStats};
pub use fock::{ModeAmplitudes, NPhotonState};
pub use metrics::SensitivityReport;
pub use scan::{EtaScanRow, PhaseScanRow, Table1Row};
pub use schwinger::{JOperatorSet, SpectralDecomposition};

pub use num_complex::Complex64;
