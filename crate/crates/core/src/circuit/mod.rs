//! Undriven circuit Hamiltonians: construction, diagonalization and labeling.

mod capacitance;
mod charge;
mod fock;
mod multimode;
mod potential;

pub use capacitance::{capacitance_network, CapacitanceInputs, CapacitanceNetwork};
pub use charge::build_single_mode_charge;
pub use fock::{build_single_mode_fock, ladder, DvrFrame};
pub use multimode::{build_array_mode, build_buffer_coupled, build_inductance};
pub use potential::{cos_terms, find_minimum, harmonic_frame, taylor_coefficients, CosTerm, TaylorCoefficients};

use ndarray::{Array1, Array2};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::linalg::{dagger, C64};
use crate::units::{ghz, mhz, TWO_PI};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scenario {
    SingleMode,
    Buffer,
    ArrayMode,
    Inductance,
}

impl std::fmt::Display for Scenario {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Scenario::SingleMode => "single-mode",
            Scenario::Buffer => "buffer",
            Scenario::ArrayMode => "array-mode",
            Scenario::Inductance => "inductance",
        };
        f.write_str(s)
    }
}

/// Which SNAIL potential to use. `Harmonic` keeps only the quadratic term
/// about the minimum and exists for diagnostics.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PotentialModel {
    #[default]
    Full,
    Harmonic,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BufferParams {
    pub omega_b: f64,
    pub g: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArrayParams {
    pub beta: f64,
    pub g: f64,
    #[serde(default)]
    pub include_transverse: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct InductorParams {
    pub e_l: f64,
    pub omega_l: f64,
}

/// Circuit parameters. Energies and frequencies are angular frequencies.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CircuitSpec {
    pub scenario: Scenario,
    pub e_j: f64,
    pub e_c: f64,
    pub alpha: f64,
    pub phi_ext: f64,
    pub n_large_junctions: u32,
    #[serde(default)]
    pub potential: PotentialModel,
    #[serde(default)]
    pub buffer: Option<BufferParams>,
    #[serde(default)]
    pub array: Option<ArrayParams>,
    #[serde(default)]
    pub inductor: Option<InductorParams>,
}

impl CircuitSpec {
    pub fn single_mode(e_j: f64, e_c: f64, alpha: f64, phi_ext: f64) -> Self {
        CircuitSpec {
            scenario: Scenario::SingleMode,
            e_j,
            e_c,
            alpha,
            phi_ext,
            n_large_junctions: 6,
            potential: PotentialModel::Full,
            buffer: None,
            array: None,
            inductor: None,
        }
    }

    /// The double-SNAIL parameters used throughout the single-mode study.
    pub fn fig1() -> Self {
        Self::single_mode(ghz(272.436), mhz(107.8), 0.046, 0.33 * TWO_PI)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.e_j > 0.0) {
            return invalid(format!("circuit.e_j must be > 0, got {}", self.e_j));
        }
        if !(self.e_c > 0.0) {
            return invalid(format!("circuit.e_c must be > 0, got {}", self.e_c));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return invalid(format!("circuit.alpha must lie in (0, 1), got {}", self.alpha));
        }
        if !self.phi_ext.is_finite() {
            return invalid("circuit.phi_ext must be finite");
        }
        if self.n_large_junctions < 2 || self.n_large_junctions % 2 != 0 {
            return invalid(format!(
                "circuit.n_large_junctions must be even and >= 2, got {}",
                self.n_large_junctions
            ));
        }
        let present = |b: bool, name: &str, want: bool| -> Result<()> {
            match (b, want) {
                (true, false) => invalid(format!("circuit.{name} must be absent for scenario {}", self.scenario)),
                (false, true) => invalid(format!("circuit.{name} is required for scenario {}", self.scenario)),
                _ => Ok(()),
            }
        };
        present(self.buffer.is_some(), "buffer", self.scenario == Scenario::Buffer)?;
        present(self.array.is_some(), "array", self.scenario == Scenario::ArrayMode)?;
        present(self.inductor.is_some(), "inductor", self.scenario == Scenario::Inductance)?;
        if let Some(b) = &self.buffer {
            if !(b.omega_b > 0.0) {
                return invalid("circuit.buffer.omega_b must be > 0");
            }
        }
        if let Some(a) = &self.array {
            if !(a.beta > 0.0) {
                return invalid("circuit.array.beta must be > 0");
            }
        }
        if let Some(l) = &self.inductor {
            if !(l.e_l > 0.0 && l.omega_l > 0.0) {
                return invalid("circuit.inductor.e_l and omega_l must be > 0");
            }
        }
        Ok(())
    }

    fn expect(&self, scenario: Scenario) -> Result<()> {
        if self.scenario != scenario {
            return Err(Error::ScenarioMismatch { expected: scenario.to_string(), found: self.scenario.to_string() });
        }
        self.validate()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Basis {
    #[default]
    Fock,
    Charge,
}

/// Truncation parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct HilbertConfig {
    pub basis: Basis,
    /// Fock states kept after building operators in a padded space.
    pub n_fock: usize,
    /// Charge cutoff; the lattice runs over `-n_charge_max..=n_charge_max`.
    pub n_charge_max: usize,
    /// Dressed levels retained. In multimode scenarios this bounds the SNAIL
    /// label `i_s` (product-label filter).
    pub n_keep: usize,
    /// Fock states of the secondary mode; retained labels satisfy `j < secondary_mode_dim`.
    pub secondary_mode_dim: usize,
    /// SNAIL dressed levels used to build multimode product bases.
    pub snail_basis: usize,
    /// Extra Fock states used when building cosine operators, cut afterwards.
    pub fock_pad: usize,
    /// Multimode retention: keep at most this many states after the label filter.
    pub max_retained: Option<usize>,
}

impl Default for HilbertConfig {
    fn default() -> Self {
        HilbertConfig {
            basis: Basis::Fock,
            n_fock: 250,
            n_charge_max: 400,
            n_keep: 160,
            secondary_mode_dim: 5,
            snail_basis: 200,
            fock_pad: 80,
            max_retained: None,
        }
    }
}

impl HilbertConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_keep == 0 {
            return invalid("hilbert.n_keep must be > 0");
        }
        if self.basis == Basis::Fock && self.n_keep > self.n_fock {
            return invalid(format!("hilbert.n_keep ({}) exceeds n_fock ({})", self.n_keep, self.n_fock));
        }
        if self.basis == Basis::Charge && self.n_charge_max == 0 {
            return invalid("hilbert.n_charge_max must be > 0");
        }
        if self.secondary_mode_dim == 0 {
            return invalid("hilbert.secondary_mode_dim must be > 0");
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Zpf {
    pub phi_zpf: f64,
    pub n_zpf: f64,
}

/// Operators in the retained dressed basis.
#[derive(Clone, Debug)]
pub struct Operators {
    /// SNAIL charge `n`.
    pub n: Array2<C64>,
    /// SNAIL phase `phi` (absent in the charge basis).
    pub phi: Option<Array2<C64>>,
    /// SNAIL annihilation operator of the harmonic frame (absent in the charge basis).
    pub a: Option<Array2<C64>>,
    /// Normalized secondary-mode charge `i(b^dag - b)`.
    pub secondary_charge: Option<Array2<C64>>,
    /// Secondary-mode annihilation operator.
    pub secondary_a: Option<Array2<C64>>,
}

impl Operators {
    /// Normalized SNAIL charge `p = i(a^dag - a) = n / n_zpf`.
    pub fn p(&self, zpf: &Zpf) -> Array2<C64> {
        &self.n / C64::new(zpf.n_zpf, 0.0)
    }
}

/// Map from the construction basis to SNAIL Fock states, tensored with the
/// secondary mode (construction index = `snail_index * secondary_dim + j`).
#[derive(Clone, Debug)]
pub struct FockMap {
    /// Columns: construction-basis SNAIL states expanded in SNAIL Fock states.
    pub snail: Array2<C64>,
    pub secondary_dim: usize,
}

/// Diagonalized undriven circuit.
#[derive(Clone, Debug)]
pub struct SpectralData {
    pub scenario: Scenario,
    pub basis: Basis,
    /// Retained dressed energies (rad/s), ascending.
    pub energies: Array1<f64>,
    /// Retained eigenvectors as columns in the construction basis.
    pub states: Array2<C64>,
    /// `(i_s, j_x)` per retained state.
    pub labels: Vec<(usize, usize)>,
    pub ops: Operators,
    pub zpf: Zpf,
    pub phi_min: f64,
    pub fock_map: Option<FockMap>,
    pub warnings: Vec<String>,
}

impl SpectralData {
    pub fn dim(&self) -> usize {
        self.energies.len()
    }

    /// Index of the state with label `(i, j)`.
    pub fn index_of(&self, label: (usize, usize)) -> Option<usize> {
        self.labels.iter().position(|&l| l == label)
    }

    /// Retained states expressed in SNAIL Fock states, for single-mode builds.
    /// Returns `n_fock x n_keep`.
    pub fn snail_fock_states(&self) -> Option<Array2<C64>> {
        let map = self.fock_map.as_ref()?;
        if map.secondary_dim != 1 {
            return None;
        }
        Some(map.snail.dot(&self.states))
    }

    /// Reduced SNAIL density matrix in the Fock basis for a density matrix
    /// given in the retained dressed basis.
    pub fn snail_fock_density(&self, rho: &Array2<C64>) -> Option<Array2<C64>> {
        let map = self.fock_map.as_ref()?;
        let full = self.states.dot(&rho.dot(&dagger(&self.states)));
        let d = map.secondary_dim;
        let ns = map.snail.ncols();
        let mut reduced = Array2::<C64>::zeros((ns, ns));
        for i in 0..ns {
            for k in 0..ns {
                let mut acc = C64::new(0.0, 0.0);
                for j in 0..d {
                    acc += full[[i * d + j, k * d + j]];
                }
                reduced[[i, k]] = acc;
            }
        }
        Some(map.snail.dot(&reduced.dot(&dagger(&map.snail))))
    }
}

/// Builds the spectrum for any scenario.
pub fn build(spec: &CircuitSpec, cfg: &HilbertConfig) -> Result<SpectralData> {
    match spec.scenario {
        Scenario::SingleMode => build_single_mode(spec, cfg),
        Scenario::Buffer => build_buffer_coupled(spec, cfg),
        Scenario::ArrayMode => build_array_mode(spec, cfg),
        Scenario::Inductance => build_inductance(spec, cfg),
    }
}

pub fn build_single_mode(spec: &CircuitSpec, cfg: &HilbertConfig) -> Result<SpectralData> {
    spec.expect(Scenario::SingleMode)?;
    cfg.validate()?;
    match cfg.basis {
        Basis::Fock => build_single_mode_fock(spec, cfg),
        Basis::Charge => build_single_mode_charge(spec, cfg),
    }
}

/// Relative error `|E_fock - E_charge| / |E_charge|` per level.
pub fn compare_bases(spec: &CircuitSpec, cfg_fock: &HilbertConfig, cfg_charge: &HilbertConfig) -> Result<Vec<f64>> {
    let mut f = cfg_fock.clone();
    f.basis = Basis::Fock;
    let mut c = cfg_charge.clone();
    c.basis = Basis::Charge;
    let a = build_single_mode(spec, &f)?;
    let b = build_single_mode(spec, &c)?;
    let n = a.dim().min(b.dim());
    Ok((0..n).map(|k| (a.energies[k] - b.energies[k]).abs() / b.energies[k].abs()).collect())
}

/// Rotates a construction-basis operator into the retained eigenbasis.
pub(crate) fn rotate(states: &Array2<C64>, op: &Array2<C64>) -> Array2<C64> {
    dagger(states).dot(&op.dot(states))
}

/// Fixes the sign of each real eigenvector so its largest component is positive.
pub(crate) fn fix_signs(v: &mut Array2<f64>) {
    for mut col in v.columns_mut() {
        let mut best = 0.0f64;
        for &x in col.iter() {
            if x.abs() > best.abs() + 1e-12 {
                best = x;
            }
        }
        if best < 0.0 {
            col.mapv_inplace(|x| -x);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation_rejects_bad_specs() {
        let mut s = CircuitSpec::fig1();
        assert!(s.validate().is_ok());
        s.alpha = 1.5;
        assert!(s.validate().is_err());
        let mut s = CircuitSpec::fig1();
        s.buffer = Some(BufferParams { omega_b: 1.0, g: 0.0 });
        assert!(s.validate().is_err());
        let mut s = CircuitSpec::fig1();
        s.scenario = Scenario::Buffer;
        assert!(s.validate().is_err());
    }

    #[test]
    fn scenario_mismatch_is_reported() {
        let mut s = CircuitSpec::fig1();
        s.scenario = Scenario::Buffer;
        s.buffer = Some(BufferParams { omega_b: 1.0, g: 0.0 });
        let err = build_single_mode(&s, &HilbertConfig::default()).unwrap_err();
        assert!(matches!(err, Error::ScenarioMismatch { .. }));
    }
}
