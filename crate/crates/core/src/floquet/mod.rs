//! Floquet modes and quasienergies of the periodically driven circuit.
//!
//! The drive enters as `H(t) = H0 + f(t) V`, with `H0` diagonal in the
//! dressed basis and `V` the driven operator (the SNAIL charge). Quasienergies
//! live in the Brillouin zone `[-omega_d/2, omega_d/2)`.

mod assign;
mod decompose;
mod events;
mod propagator;
mod sweep;

pub use assign::hungarian_max;
pub use decompose::{align_degenerate_clusters, floquet_decompose, fold, gauge_fix};
pub use events::{detect_events, kissing_transform, CrossingEvent, EventConfig, KissEvent, RefoldedSpectrum};
pub use propagator::{Propagation, FOURTH_ORDER_WEIGHTS};
pub use sweep::{
    extrapolate_frequency, micromotion_samples, solve_point, sweep, tune_drive_frequency, CheckpointRecord, Checkpointer,
    ResumeState, TuneOutcome,
};

use ndarray::{Array1, Array2};
use serde::{Deserialize, Serialize};

use crate::circuit::SpectralData;
use crate::error::{invalid, Result};
use crate::linalg::{eigh, hermiticity_residual, C64};
use crate::units::khz;

/// Operator the drive couples to.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DrivenOperator {
    #[default]
    SnailCharge,
}

/// `eps_d cos(omega_d t + phase)` coupled to the driven operator.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DriveSpec {
    pub eps_d: f64,
    pub omega_d: f64,
    #[serde(default)]
    pub phase: f64,
    #[serde(default)]
    pub coupling: DrivenOperator,
}

impl DriveSpec {
    pub fn new(eps_d: f64, omega_d: f64) -> Self {
        DriveSpec { eps_d, omega_d, phase: 0.0, coupling: DrivenOperator::SnailCharge }
    }

    pub fn period(&self) -> f64 {
        std::f64::consts::TAU / self.omega_d
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.eps_d >= 0.0) {
            return invalid(format!("drive amplitude must be >= 0, got {}", self.eps_d));
        }
        if !(self.omega_d > 0.0) {
            return invalid(format!("drive frequency must be > 0, got {}", self.omega_d));
        }
        Ok(())
    }

    pub fn waveform(&self) -> impl Fn(f64) -> f64 + '_ {
        move |t| self.eps_d * (self.omega_d * t + self.phase).cos()
    }
}

/// Numerical settings of the Floquet engine.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FloquetConfig {
    /// Fourth-order split-operator steps per drive period.
    pub n_steps: usize,
    /// Micromotion samples per period (power of two, divides `n_steps`).
    pub n_samples: usize,
    pub unitarity_tol: f64,
    /// Self-consistent tuning tolerance on `omega_d` (rad/s).
    pub tune_tol: f64,
    pub tune_max_iter: usize,
    pub tune_damping: f64,
    /// Tracking fidelity below which a branch is flagged lost.
    pub fidelity_floor: f64,
    /// Quasienergy spread, relative to `omega_d`, treated as a degenerate cluster.
    pub degeneracy_tol: f64,
    /// Keep `modes_t0` of every sweep point in the returned branch set.
    pub keep_modes: bool,
    /// Keep micromotion samples of every sweep point in the returned branch set.
    pub keep_samples: bool,
}

impl Default for FloquetConfig {
    fn default() -> Self {
        FloquetConfig {
            n_steps: 256,
            n_samples: 32,
            unitarity_tol: 1e-9,
            tune_tol: khz(1.0),
            tune_max_iter: 50,
            tune_damping: 0.7,
            fidelity_floor: 0.3,
            degeneracy_tol: 1e-7,
            keep_modes: true,
            keep_samples: false,
        }
    }
}

impl FloquetConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_steps == 0 || self.n_samples == 0 {
            return invalid("floquet.n_steps and n_samples must be > 0");
        }
        if !self.n_samples.is_power_of_two() {
            return invalid(format!("floquet.n_samples must be a power of two, got {}", self.n_samples));
        }
        if self.n_steps % self.n_samples != 0 {
            return invalid("floquet.n_samples must divide n_steps");
        }
        if !(self.tune_damping > 0.0 && self.tune_damping <= 1.0) {
            return invalid("floquet.tune_damping must lie in (0, 1]");
        }
        Ok(())
    }
}

/// Static part of a driven problem: dressed energies and the driven operator.
#[derive(Clone, Debug)]
pub struct FloquetSystem {
    /// Dressed energies relative to the ground state.
    pub energies: Array1<f64>,
    /// Driven operator in the dressed basis.
    pub coupling: Array2<C64>,
    /// `a^dag a` in the dressed basis, when available.
    pub photon: Option<Array2<C64>>,
    w: Array2<C64>,
    v: Array1<f64>,
}

impl FloquetSystem {
    pub fn new(energies: Array1<f64>, coupling: Array2<C64>, photon: Option<Array2<C64>>) -> Result<Self> {
        let n = energies.len();
        if coupling.dim() != (n, n) {
            return Err(crate::error::Error::Dimension(format!(
                "coupling is {:?}, expected {n}x{n}",
                coupling.dim()
            )));
        }
        let scale = coupling.iter().fold(0.0f64, |m, z| m.max(z.norm())).max(1.0);
        if hermiticity_residual(&coupling) > 1e-9 * scale {
            return invalid("driven operator is not Hermitian");
        }
        let e0 = energies.get(0).copied().unwrap_or(0.0);
        let (v, w) = eigh(&coupling)?;
        Ok(FloquetSystem { energies: energies.mapv(|e| e - e0), coupling, photon, w, v })
    }

    pub fn from_spectral(sd: &SpectralData) -> Result<Self> {
        let photon = sd.ops.a.as_ref().map(|a| crate::linalg::dagger(a).dot(a));
        Self::new(sd.energies.clone(), sd.ops.n.clone(), photon)
    }

    pub fn dim(&self) -> usize {
        self.energies.len()
    }
}

/// Floquet solution at one drive amplitude, columns indexed by branch label.
#[derive(Clone, Debug)]
pub struct FloquetPoint {
    pub eps_d: f64,
    pub omega_d: f64,
    pub quasienergies: Array1<f64>,
    /// Empty when modes were not kept.
    pub modes_t0: Array2<C64>,
    /// `n_samples` snapshots of the modes over one period (may be empty).
    pub mode_samples: Vec<Array2<C64>>,
    /// `labels[mu]` is the decomposition column assigned to branch `mu`.
    pub labels: Vec<usize>,
    pub tracking_fidelity: Array1<f64>,
    /// Largest overlap of each branch's previous mode with another branch.
    pub partner: Vec<(usize, f64)>,
    pub lost: Vec<bool>,
    pub photon_numbers: Option<[f64; 2]>,
    pub tune_iterations: usize,
    /// Set when tuning failed; the point then carries the last iterate.
    pub failure: Option<String>,
}

/// Tracked branches across an amplitude sweep.
#[derive(Clone, Debug, Default)]
pub struct FloquetBranchSet {
    pub points: Vec<FloquetPoint>,
    pub kiss_events: Vec<KissEvent>,
    pub crossing_events: Vec<CrossingEvent>,
}
