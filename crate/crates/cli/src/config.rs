//! Run configuration as written by users: frequencies in Hz, flux in flux quanta.

use std::path::{Path, PathBuf};

use kerrcat::analysis::AnalysisOptions;
use kerrcat::circuit::{ArrayParams, BufferParams, CircuitSpec, HilbertConfig, InductorParams, PotentialModel, Scenario};
use kerrcat::floquet::FloquetConfig;
use kerrcat::lindblad::{BathSpec, Channel, ChannelOperator, FlatSpectrum, HarmonicValue, TableOptions};
use kerrcat::units::{from_hz, TWO_PI};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub circuit: CircuitConfig,
    #[serde(default)]
    pub hilbert: HilbertConfig,
    #[serde(default)]
    pub floquet: FloquetSettings,
    pub bath: BathConfig,
    pub sweep: SweepRange,
    #[serde(default)]
    pub outputs: OutputConfig,
    #[serde(default)]
    pub compute: ComputeConfig,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BufferConfig {
    pub omega_b: f64,
    pub g: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrayConfig {
    pub beta: f64,
    pub g: f64,
    #[serde(default)]
    pub include_transverse: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InductorConfig {
    pub e_l: f64,
    pub omega_l: f64,
}

/// Circuit parameters; energies in Hz, `phi_ext` in flux quanta.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircuitConfig {
    pub scenario: Scenario,
    pub e_j: f64,
    pub e_c: f64,
    pub alpha: f64,
    pub phi_ext: f64,
    #[serde(default = "default_junctions")]
    pub n_large_junctions: u32,
    #[serde(default)]
    pub potential: PotentialModel,
    #[serde(default)]
    pub buffer: Option<BufferConfig>,
    #[serde(default)]
    pub array: Option<ArrayConfig>,
    #[serde(default)]
    pub inductor: Option<InductorConfig>,
}

fn default_junctions() -> u32 {
    6
}

/// Floquet solver settings; `tune_tol` in Hz.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FloquetSettings {
    pub n_steps: usize,
    pub n_samples: usize,
    pub unitarity_tol: f64,
    pub tune_tol: f64,
    pub tune_max_iter: usize,
    pub tune_damping: f64,
    pub fidelity_floor: f64,
    pub degeneracy_tol: f64,
}

impl Default for FloquetSettings {
    fn default() -> Self {
        let d = FloquetConfig::default();
        FloquetSettings {
            n_steps: d.n_steps,
            n_samples: d.n_samples,
            unitarity_tol: d.unitarity_tol,
            tune_tol: 1e3,
            tune_max_iter: d.tune_max_iter,
            tune_damping: d.tune_damping,
            fidelity_floor: d.fidelity_floor,
            degeneracy_tol: d.degeneracy_tol,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HarmonicConfig {
    pub m: u32,
    /// Spectral density in Hz.
    pub j: f64,
    /// Kelvin.
    pub temperature: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlatConfig {
    pub j: f64,
    pub temperature: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelConfig {
    #[serde(default)]
    pub operator: ChannelOperator,
    #[serde(default)]
    pub harmonics: Vec<HarmonicConfig>,
    #[serde(default)]
    pub flat: Option<FlatConfig>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BathConfig {
    pub channels: Vec<ChannelConfig>,
    /// Hz.
    #[serde(default = "default_threshold")]
    pub quasideg_threshold: f64,
}

fn default_threshold() -> f64 {
    1e5
}

/// Drive amplitudes in Hz; the grid is `k * delta_eps` up to `eps_max`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepRange {
    pub eps_min: f64,
    pub eps_max: f64,
    pub delta_eps: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TimeGridPolicy {
    pub points: usize,
    /// First nonzero time in units of `1 / gap`.
    pub t_min_gap: f64,
    pub t_max_gap: f64,
}

impl Default for TimeGridPolicy {
    fn default() -> Self {
        let d = AnalysisOptions::default();
        TimeGridPolicy { points: d.time_points, t_min_gap: d.t_min_gap, t_max_gap: d.t_max_gap }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PhaseGridPolicy {
    pub points: usize,
}

impl Default for PhaseGridPolicy {
    fn default() -> Self {
        PhaseGridPolicy { points: AnalysisOptions::default().phase_points }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    /// Tunneling time from assignment-error trajectories.
    pub dynamics: bool,
    /// `T_Z` from the decay of `<X_L>`.
    pub coherence: bool,
    /// Quasienergies written per row.
    pub quasienergies: usize,
    /// Branches entering the minimum tracking fidelity and event detection.
    pub branches: usize,
    /// Refolded gap (Hz) below which a pair counts as kissing.
    pub kiss_tol: f64,
    /// Floquet modes entering the master equation.
    pub level_cut: usize,
    pub k_max: usize,
    pub element_floor: f64,
    pub time_grid: TimeGridPolicy,
    pub phase_grid: PhaseGridPolicy,
}

impl Default for OutputConfig {
    fn default() -> Self {
        let t = TableOptions::default();
        OutputConfig {
            dynamics: true,
            coherence: true,
            quasienergies: 12,
            branches: 20,
            kiss_tol: 1e5,
            level_cut: 40,
            k_max: t.k_max,
            element_floor: t.element_floor,
            time_grid: TimeGridPolicy::default(),
            phase_grid: PhaseGridPolicy::default(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ComputeConfig {
    /// Worker threads for post-processing; 0 uses all cores.
    pub workers: usize,
    pub checkpoint: Option<PathBuf>,
    pub resume: bool,
}

/// A config that failed to parse or validate.
#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{} validation error(s):\n  {}", .0.len(), .0.join("\n  "))]
    Invalid(Vec<String>),
    #[error("unknown preset {0:?}")]
    UnknownPreset(String),
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        toml::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read { path: path.to_path_buf(), source })?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("config serializes")
    }

    /// Every schema and unit violation, each prefixed by its field path.
    pub fn validate(&self) -> Result<(), ConfigError> {
        let mut errs = vec![];
        let mut check = |ok: bool, path: &str, msg: String| {
            if !ok {
                errs.push(format!("{path}: {msg}"));
            }
        };
        let c = &self.circuit;
        check(c.e_j > 0.0, "circuit.e_j", format!("must be > 0 Hz, got {}", c.e_j));
        check(c.e_c > 0.0, "circuit.e_c", format!("must be > 0 Hz, got {}", c.e_c));
        check(c.alpha > 0.0 && c.alpha < 1.0, "circuit.alpha", format!("must lie in (0, 1), got {}", c.alpha));
        check(c.phi_ext.is_finite(), "circuit.phi_ext", "must be finite".into());
        check(
            c.n_large_junctions >= 2 && c.n_large_junctions % 2 == 0,
            "circuit.n_large_junctions",
            format!("must be even and >= 2, got {}", c.n_large_junctions),
        );
        let want = |s: Scenario| c.scenario == s;
        check(c.buffer.is_some() == want(Scenario::Buffer), "circuit.buffer", format!("must be given exactly for scenario buffer (scenario is {})", c.scenario));
        check(c.array.is_some() == want(Scenario::ArrayMode), "circuit.array", format!("must be given exactly for scenario array-mode (scenario is {})", c.scenario));
        check(
            c.inductor.is_some() == want(Scenario::Inductance),
            "circuit.inductor",
            format!("must be given exactly for scenario inductance (scenario is {})", c.scenario),
        );
        if let Some(b) = c.buffer {
            check(b.omega_b > 0.0, "circuit.buffer.omega_b", format!("must be > 0 Hz, got {}", b.omega_b));
            check(b.g.is_finite(), "circuit.buffer.g", "must be finite".into());
        }
        if let Some(a) = c.array {
            check(a.beta > 0.0, "circuit.array.beta", format!("must be > 0, got {}", a.beta));
            check(a.g.is_finite(), "circuit.array.g", "must be finite".into());
        }
        if let Some(l) = c.inductor {
            check(l.e_l > 0.0, "circuit.inductor.e_l", format!("must be > 0 Hz, got {}", l.e_l));
            check(l.omega_l > 0.0, "circuit.inductor.omega_l", format!("must be > 0 Hz, got {}", l.omega_l));
        }
        let h = &self.hilbert;
        check(h.n_keep > 0, "hilbert.n_keep", "must be > 0".into());
        check(h.secondary_mode_dim > 0, "hilbert.secondary_mode_dim", "must be > 0".into());
        if h.basis == kerrcat::circuit::Basis::Fock {
            check(h.n_keep <= h.n_fock, "hilbert.n_keep", format!("must not exceed n_fock ({})", h.n_fock));
        }
        let f = &self.floquet;
        check(f.n_samples > 0 && f.n_samples.is_power_of_two(), "floquet.n_samples", format!("must be a power of two, got {}", f.n_samples));
        check(f.n_steps > 0 && f.n_samples > 0 && f.n_steps % f.n_samples.max(1) == 0, "floquet.n_steps", "must be a positive multiple of n_samples".into());
        check(f.tune_tol > 0.0, "floquet.tune_tol", format!("must be > 0 Hz, got {}", f.tune_tol));
        check(f.tune_damping > 0.0 && f.tune_damping <= 1.0, "floquet.tune_damping", "must lie in (0, 1]".into());
        check(f.n_samples >= 4 * self.outputs.k_max + 4, "floquet.n_samples", format!("must be >= 4 k_max + 4 = {}", 4 * self.outputs.k_max + 4));
        let b = &self.bath;
        check(!b.channels.is_empty(), "bath.channels", "must not be empty".into());
        check(b.quasideg_threshold > 0.0, "bath.quasideg_threshold", format!("must be > 0 Hz, got {}", b.quasideg_threshold));
        for (i, ch) in b.channels.iter().enumerate() {
            let base = format!("bath.channels[{i}]");
            check(!ch.harmonics.is_empty() || ch.flat.is_some(), &base, "defines no spectral density".into());
            for (k, hv) in ch.harmonics.iter().enumerate() {
                check(hv.j >= 0.0, &format!("{base}.harmonics[{k}].j"), format!("must be >= 0 Hz, got {}", hv.j));
                check(
                    hv.temperature >= 0.0,
                    &format!("{base}.harmonics[{k}].temperature"),
                    format!("must be >= 0 K, got {}", hv.temperature),
                );
            }
            if let Some(fl) = ch.flat {
                check(fl.j >= 0.0, &format!("{base}.flat.j"), format!("must be >= 0 Hz, got {}", fl.j));
                check(fl.temperature >= 0.0, &format!("{base}.flat.temperature"), format!("must be >= 0 K, got {}", fl.temperature));
            }
            if ch.operator == ChannelOperator::SecondaryCharge {
                check(c.scenario != Scenario::SingleMode, &format!("{base}.operator"), "single-mode circuits have no secondary mode".into());
            }
        }
        let s = &self.sweep;
        check(s.eps_min >= 0.0, "sweep.eps_min", format!("must be >= 0 Hz, got {}", s.eps_min));
        check(s.delta_eps > 0.0, "sweep.delta_eps", format!("must be > 0 Hz, got {}", s.delta_eps));
        check(s.eps_max >= s.eps_min, "sweep.eps_max", format!("must be >= eps_min, got {}", s.eps_max));
        let o = &self.outputs;
        check(o.quasienergies > 0, "outputs.quasienergies", "must be > 0".into());
        check(o.branches >= 2, "outputs.branches", "must be >= 2".into());
        check(o.kiss_tol > 0.0, "outputs.kiss_tol", format!("must be > 0 Hz, got {}", o.kiss_tol));
        check(o.level_cut >= 2, "outputs.level_cut", "must be >= 2".into());
        check(o.level_cut <= h.n_keep, "outputs.level_cut", format!("must not exceed hilbert.n_keep ({})", h.n_keep));
        check(o.element_floor >= 0.0, "outputs.element_floor", "must be >= 0".into());
        check(o.time_grid.points >= 8, "outputs.time_grid.points", "must be >= 8".into());
        check(
            o.time_grid.t_min_gap > 0.0 && o.time_grid.t_max_gap > o.time_grid.t_min_gap,
            "outputs.time_grid",
            "must satisfy 0 < t_min_gap < t_max_gap".into(),
        );
        check(o.phase_grid.points >= 8, "outputs.phase_grid.points", "must be >= 8".into());
        if let Some(p) = &self.compute.checkpoint {
            let parent = p.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
            let writable = std::fs::metadata(parent).map(|m| m.is_dir() && !m.permissions().readonly()).unwrap_or(false);
            check(writable, "compute.checkpoint", format!("directory {} is not writable", parent.display()));
        }
        if errs.is_empty() {
            Ok(())
        } else {
            Err(ConfigError::Invalid(errs))
        }
    }

    pub fn circuit_spec(&self) -> CircuitSpec {
        let c = &self.circuit;
        CircuitSpec {
            scenario: c.scenario,
            e_j: from_hz(c.e_j),
            e_c: from_hz(c.e_c),
            alpha: c.alpha,
            phi_ext: c.phi_ext * TWO_PI,
            n_large_junctions: c.n_large_junctions,
            potential: c.potential,
            buffer: c.buffer.map(|b| BufferParams { omega_b: from_hz(b.omega_b), g: from_hz(b.g) }),
            array: c.array.map(|a| ArrayParams { beta: a.beta, g: from_hz(a.g), include_transverse: a.include_transverse }),
            inductor: c.inductor.map(|l| InductorParams { e_l: from_hz(l.e_l), omega_l: from_hz(l.omega_l) }),
        }
    }

    pub fn floquet_config(&self) -> FloquetConfig {
        let f = &self.floquet;
        FloquetConfig {
            n_steps: f.n_steps,
            n_samples: f.n_samples,
            unitarity_tol: f.unitarity_tol,
            tune_tol: from_hz(f.tune_tol),
            tune_max_iter: f.tune_max_iter,
            tune_damping: f.tune_damping,
            fidelity_floor: f.fidelity_floor,
            degeneracy_tol: f.degeneracy_tol,
            keep_modes: true,
            keep_samples: true,
        }
    }

    pub fn bath_spec(&self) -> BathSpec {
        let channels = self
            .bath
            .channels
            .iter()
            .map(|c| Channel {
                operator: c.operator,
                harmonics: c
                    .harmonics
                    .iter()
                    .map(|h| HarmonicValue { m: h.m, j: from_hz(h.j), temperature: h.temperature })
                    .collect(),
                flat: c.flat.map(|f| FlatSpectrum { j: from_hz(f.j), temperature: f.temperature }),
            })
            .collect();
        BathSpec { channels, quasideg_threshold: from_hz(self.bath.quasideg_threshold) }
    }

    pub fn analysis_options(&self) -> AnalysisOptions {
        let o = &self.outputs;
        AnalysisOptions {
            table: TableOptions { k_max: o.k_max, level_cut: Some(o.level_cut), element_floor: o.element_floor },
            dynamics: o.dynamics,
            coherence: o.coherence,
            time_points: o.time_grid.points,
            t_min_gap: o.time_grid.t_min_gap,
            t_max_gap: o.time_grid.t_max_gap,
            phase_points: o.phase_grid.points,
        }
    }

    /// Amplitudes in Hz: `0, delta, 2 delta, ...` up to `eps_max`.
    pub fn amplitude_grid_hz(&self) -> Vec<f64> {
        let s = &self.sweep;
        let n = (s.eps_max / s.delta_eps * (1.0 + 1e-12)).floor() as usize;
        (0..=n).map(|k| k as f64 * s.delta_eps).collect()
    }

    /// SHA-256 of the physics-relevant settings; `compute` is excluded so
    /// worker counts and paths do not change the fingerprint.
    pub fn fingerprint(&self) -> String {
        let mut c = self.clone();
        c.compute = ComputeConfig::default();
        let json = serde_json::to_string(&c).expect("config serializes");
        let digest = Sha256::digest(json.as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}
