//! Error type shared by all modules.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("LAPACK routine {routine} failed with info = {info}")]
    Lapack { routine: &'static str, info: i32 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("scenario mismatch: expected {expected}, found {found}")]
    ScenarioMismatch { expected: String, found: String },

    #[error("{what} did not converge: {detail}")]
    NotConverged { what: &'static str, detail: String },

    #[error("propagator unitarity residual {0:.3e} exceeds tolerance")]
    Unitarity(f64),

    #[error("micromotion periodicity residual {0:.3e} exceeds tolerance")]
    Periodicity(f64),

    #[error("drive-frequency tuning did not converge after {iterations} iterations (last omega_d = {last:.9e} rad/s)")]
    Tuning { iterations: usize, last: f64 },

    #[error("aliasing: {n_t} samples cannot resolve harmonics up to k_max = {k_max}")]
    Aliasing { n_t: usize, k_max: usize },

    #[error("transition frequency {omega:.6e} rad/s lies outside the modeled harmonic clusters")]
    HarmonicOutOfRange { omega: f64 },

    #[error("perturbative expansion invalid: |Pi| = {0:.4} >= 1")]
    PiOutOfRange(f64),

    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("singular matrix in {0}")]
    Singular(&'static str),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInput(msg.into()))
}
