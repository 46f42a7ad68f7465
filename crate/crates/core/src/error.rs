use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("truncation n_max = {n_max} exceeds the ceiling of {ceiling}")]
    TruncationTooLarge { n_max: usize, ceiling: usize },

    #[error("photon number N = {n} is outside the supported range 1..={ceiling}")]
    PhotonNumberOutOfRange { n: usize, ceiling: usize },

    #[error("down-conversion amplitude gamma = {0} must lie in [0, 1)")]
    InvalidGamma(f64),

    #[error("coherent amplitude alpha = {0} must be positive and finite")]
    InvalidAlpha(f64),

    #[error("squeezing parameter eta = {eta} must be finite and in [0, {limit})")]
    InvalidEta { eta: f64, limit: f64 },

    #[error("N = {n} exceeds the truncation n_max = {n_max} of a mode expansion")]
    SectorBeyondTruncation { n: usize, n_max: usize },

    #[error("the {0}-photon sector has zero probability")]
    EmptySector(usize),

    #[error("state must have at least two amplitudes and a nonzero norm")]
    InvalidState,

    #[error("dimension mismatch: operator is {op}x{op}, state has {state} amplitudes")]
    DimensionMismatch { op: usize, state: usize },

    #[error("expectation value has imaginary part {0:e}; operator is not Hermitian")]
    NonHermitian(f64),

    #[error("<J1> = 0, the J2 phase estimator is undefined")]
    UndefinedEstimator,

    #[error("generator variance is zero, the Cramer-Rao bound is undefined")]
    ZeroGeneratorVariance,

    #[error("{0}")]
    Domain(&'static str),
}
