//! Schwinger representation of the N-photon sector.
//!
//! With input modes `a` and `b`,
//!
//! ```text
//! J1 = (a†a - b†b) / 2
//! J2 = (a†b + a b†) / 2
//! J3 = -(i/2) (a†b - a b†)
//! ```
//!
//! so that `[J1, J2] = i J3` and cyclic. `J1` is half the photon number
//! difference of the inputs, `J2` of the outputs at zero phase and `J3` of the
//! two interferometer paths. The phase shift acts as `exp(-i phi J3)` on states,
//! equivalently `J2(phi) = cos(phi) J2 + sin(phi) J1` on the estimator.

use std::sync::OnceLock;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::NPhotonState;

/// Largest photon number for which operator matrices are built.
pub const MAX_PHOTONS: usize = 200;

/// Eigenvalues closer than this to a multiple of 1/2 are snapped onto it.
const SNAP_TOL: f64 = 1e-8;

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    /// Orthonormal eigenvectors stored as columns, in eigenvalue order.
    pub eigenvectors: DMatrix<Complex64>,
}

impl SpectralDecomposition {
    /// Dense Hermitian eigensolve with eigenvalues sorted ascending.
    pub fn hermitian(matrix: &DMatrix<Complex64>) -> Self {
        let eig = SymmetricEigen::new(matrix.clone());
        let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
        order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
        let eigenvalues = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let columns: Vec<_> = order.iter().map(|&i| eig.eigenvectors.column(i)).collect();
        Self {
            eigenvalues,
            eigenvectors: DMatrix::from_columns(&columns),
        }
    }

    /// Replaces eigenvalues within `SNAP_TOL` of a half-integer by that value.
    fn snap_to_half_integers(mut self) -> Self {
        for ev in &mut self.eigenvalues {
            let exact = (2.0 * *ev).round() / 2.0;
            if (*ev - exact).abs() < SNAP_TOL {
                *ev = exact;
            }
        }
        self
    }

    /// `V diag(lambda) V†`.
    pub fn reconstruct(&self) -> DMatrix<Complex64> {
        let diag = DVector::from_iterator(
            self.eigenvalues.len(),
            self.eigenvalues.iter().map(|&l| Complex64::new(l, 0.0)),
        );
        &self.eigenvectors * DMatrix::from_diagonal(&diag) * self.eigenvectors.adjoint()
    }

    /// `V diag(f(lambda)) V†`.
    pub fn apply_function(&self, f: impl Fn(f64) -> Complex64) -> DMatrix<Complex64> {
        let diag = DVector::from_iterator(
            self.eigenvalues.len(),
            self.eigenvalues.iter().map(|&l| f(l)),
        );
        &self.eigenvectors * DMatrix::from_diagonal(&diag) * self.eigenvectors.adjoint()
    }

    fn min_gap(&self) -> f64 {
        self.eigenvalues
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::INFINITY, f64::min)
    }
}

/// The three Schwinger operators and `b†b` on the N-photon sector.
#[derive(Debug)]
pub struct JOperatorSet {
    n_total: usize,
    j1: DMatrix<Complex64>,
    j2: DMatrix<Complex64>,
    j3: DMatrix<Complex64>,
    pair_number: DMatrix<Complex64>,
    j2_spectrum: OnceLock<SpectralDecomposition>,
    j3_spectrum: OnceLock<SpectralDecomposition>,
}

impl JOperatorSet {
    pub fn new(n_total: usize) -> Result<Self> {
        if n_total == 0 || n_total > MAX_PHOTONS {
            return Err(Error::PhotonNumberOutOfRange {
                n: n_total,
                ceiling: MAX_PHOTONS,
            });
        }
        let dim = n_total + 1;
        let half_n = n_total as f64 / 2.0;
        let mut j1 = DMatrix::zeros(dim, dim);
        let mut j2 = DMatrix::zeros(dim, dim);
        let mut j3 = DMatrix::zeros(dim, dim);
        let mut pair_number = DMatrix::zeros(dim, dim);
        for k in 0..dim {
            j1[(k, k)] = Complex64::new(half_n - k as f64, 0.0);
            pair_number[(k, k)] = Complex64::new(k as f64, 0.0);
        }
        for k in 0..n_total {
            // <N-k; k| a†b |N-k-1; k+1> = sqrt((N-k)(k+1))
            let hop = (((n_total - k) * (k + 1)) as f64).sqrt() / 2.0;
            j2[(k, k + 1)] = Complex64::new(hop, 0.0);
            j2[(k + 1, k)] = Complex64::new(hop, 0.0);
            j3[(k, k + 1)] = Complex64::new(0.0, -hop);
            j3[(k + 1, k)] = Complex64::new(0.0, hop);
        }
        Ok(Self {
            n_total,
            j1,
            j2,
            j3,
            pair_number,
            j2_spectrum: OnceLock::new(),
            j3_spectrum: OnceLock::new(),
        })
    }

    pub fn n_total(&self) -> usize {
        self.n_total
    }

    pub fn dim(&self) -> usize {
        self.n_total + 1
    }

    pub fn j1(&self) -> &DMatrix<Complex64> {
        &self.j1
    }

    pub fn j2(&self) -> &DMatrix<Complex64> {
        &self.j2
    }

    pub fn j3(&self) -> &DMatrix<Complex64> {
        &self.j3
    }

    /// `b†b`, diagonal with entries `k`.
    pub fn pair_number(&self) -> &DMatrix<Complex64> {
        &self.pair_number
    }

    pub fn j2_spectrum(&self) -> &SpectralDecomposition {
        self.j2_spectrum
            .get_or_init(|| self.checked_spectrum(&self.j2))
    }

    pub fn j3_spectrum(&self) -> &SpectralDecomposition {
        self.j3_spectrum
            .get_or_init(|| self.checked_spectrum(&self.j3))
    }

    fn checked_spectrum(&self, op: &DMatrix<Complex64>) -> SpectralDecomposition {
        let spec = SpectralDecomposition::hermitian(op).snap_to_half_integers();
        // Spin N/2 in a single irrep: eigenvalues -N/2..=N/2 in unit steps.
        assert!(
            spec.min_gap() > 0.5,
            "degenerate spectrum in the {}-photon sector",
            self.n_total
        );
        spec
    }

    /// Heisenberg-picture estimator `cos(phi) J2 + sin(phi) J1`.
    pub fn rotated_j2(&self, phi: f64) -> DMatrix<Complex64> {
        let (s, c) = phi.sin_cos();
        &self.j2 * Complex64::new(c, 0.0) + &self.j1 * Complex64::new(s, 0.0)
    }

    /// `exp(-i phi J3)`.
    pub fn phase_shift(&self, phi: f64) -> DMatrix<Complex64> {
        self.j3_spectrum()
            .apply_function(|l| Complex64::from_polar(1.0, -phi * l))
    }

    /// Schrödinger-picture phase shift of a state.
    pub fn rotate(&self, state: &NPhotonState, phi: f64) -> Result<NPhotonState> {
        self.check_dim(state)?;
        NPhotonState::from_vector(self.phase_shift(phi) * state.amplitudes())
    }

    /// Probabilities of the `J2` outcomes `m = -N/2, ..., N/2` after a phase
    /// shift `phi`: `|<m| exp(-i phi J3) |psi>|^2`.
    pub fn output_distribution(&self, state: &NPhotonState, phi: f64) -> Result<Vec<f64>> {
        self.check_dim(state)?;
        let shifted = self.phase_shift(phi) * state.amplitudes();
        let projected = self.j2_spectrum().eigenvectors.adjoint() * shifted;
        Ok(projected.iter().map(|c| c.norm_sqr()).collect())
    }

    /// The outcome values `m` matching [`Self::output_distribution`].
    pub fn j2_outcomes(&self) -> Vec<f64> {
        let half_n = self.n_total as f64 / 2.0;
        (0..=self.n_total).map(|k| k as f64 - half_n).collect()
    }

    fn check_dim(&self, state: &NPhotonState) -> Result<()> {
        if state.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                op: self.dim(),
                state: state.dim(),
            });
        }
        Ok(())
    }
}

/// `<psi| op |psi>` for a Hermitian `op`.
pub fn expectation(op: &DMatrix<Complex64>, state: &NPhotonState) -> Result<f64> {
    if op.nrows() != state.dim() || op.ncols() != state.dim() {
        return Err(Error::DimensionMismatch {
            op: op.nrows(),
            state: state.dim(),
        });
    }
    let psi = state.amplitudes();
    let value = psi.dotc(&(op * psi));
    if value.im.abs() > 1e-12 * (1.0 + value.re.abs()) {
        return Err(Error::NonHermitian(value.im));
    }
    Ok(value.re)
}

/// `<op^2> - <op>^2`, with `<op^2> = |op psi|^2` for Hermitian `op`.
pub fn variance(op: &DMatrix<Complex64>, state: &NPhotonState) -> Result<f64> {
    let mean = expectation(op, state)?;
    let second = (op * state.amplitudes()).norm_squared();
    Ok(second - mean * mean)
}
