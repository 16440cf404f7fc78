use crate::genspec::HermiticityReport;

/// Crate-wide error type.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("truncation level must be at least 1, got {0}")]
    InvalidTruncation(usize),

    #[error("photon index {n} exceeds truncation level {level}")]
    PhotonOutOfRange { n: usize, level: usize },

    #[error("operator matrix must act on a truncated Fock-atom space (even dimension >= 4), got {0}x{0}")]
    InvalidOperatorShape(usize),

    #[error("matrix is not Hermitian: defect {defect:.3e} exceeds tolerance {tol:.3e}")]
    NotHermitian { defect: f64, tol: f64 },

    #[error("pump fails the Hermiticity check: {0}")]
    PumpNotHermitian(HermiticityReport),

    #[error("unknown preset `{0}`")]
    UnknownPreset(String),

    #[error("preset `{name}` requires parameter `{param}`")]
    MissingPresetParameter { name: String, param: String },

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("invalid integrator configuration: {0}")]
    InvalidIntegrator(String),

    #[error("invalid sweep plan: {0}")]
    InvalidSweep(String),

    #[error("integration failed at truncation level {level}: {source}")]
    SweepLevel {
        level: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("eigensolver failed to converge on a {dim}x{dim} Hermitian matrix")]
    Eigensolve { dim: usize },

    #[error("unitary oracle requires gamma = 0 and a time-constant pump: {0}")]
    OracleUnavailable(String),

    #[error("step size underflow at t = {t_reached:.9e} (dt = {dt:.3e})")]
    StepUnderflow { t_reached: f64, dt: f64 },

    #[error("non-finite value detected at t = {t:.9e} during {context}")]
    NonFinite { t: f64, context: String },
}

pub type Result<T> = std::result::Result<T, Error>;
