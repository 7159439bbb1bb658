//! Shipped scenario presets. Frequencies in Hz.

use kerrcat::circuit::{HilbertConfig, PotentialModel, Scenario};

use crate::config::{
    ArrayConfig, BathConfig, BufferConfig, ChannelConfig, CircuitConfig, ComputeConfig, FloquetSettings, HarmonicConfig,
    InductorConfig, OutputConfig, RunConfig, SweepRange,
};

pub const PRESETS: [&str; 6] =
    ["fig1-single-mode", "fig5-baths", "fig6-buffer-positive", "fig10-buffer-negative", "fig7-array", "fig11-inductance"];

/// Undriven `2 omega_01 / 2pi` of the single-mode circuit, used to place the buffer.
const TWO_OMEGA_01_HZ: f64 = 12.184_96e9;
/// Buffer detuning `|Delta_bd| / 2pi`.
const BUFFER_DETUNING_HZ: f64 = 285e6;

fn single_mode_circuit() -> CircuitConfig {
    CircuitConfig {
        scenario: Scenario::SingleMode,
        e_j: 272.436e9,
        e_c: 107.8e6,
        alpha: 0.046,
        phi_ext: 0.33,
        n_large_junctions: 6,
        potential: PotentialModel::Full,
        buffer: None,
        array: None,
        inductor: None,
    }
}

/// Drive-harmonic bath on the SNAIL charge: strong and hot at `omega_d`,
/// weak and cold at `omega_d / 2` and `3 omega_d / 2`.
fn harmonic_bath() -> BathConfig {
    BathConfig {
        channels: vec![ChannelConfig {
            operator: Default::default(),
            harmonics: vec![
                HarmonicConfig { m: 1, j: 7.96e3, temperature: 0.05 },
                HarmonicConfig { m: 2, j: 796e3, temperature: 0.35 },
                HarmonicConfig { m: 3, j: 7.96e3, temperature: 0.05 },
            ],
            flat: None,
        }],
        quasideg_threshold: 1e5,
    }
}

fn base(circuit: CircuitConfig, hilbert: HilbertConfig) -> RunConfig {
    RunConfig {
        circuit,
        hilbert,
        floquet: FloquetSettings::default(),
        bath: harmonic_bath(),
        sweep: SweepRange { eps_min: 0.0, eps_max: 5e9, delta_eps: 25e6 },
        outputs: OutputConfig::default(),
        compute: ComputeConfig::default(),
    }
}

fn buffer(omega_b: f64) -> RunConfig {
    let circuit = CircuitConfig {
        scenario: Scenario::Buffer,
        buffer: Some(BufferConfig { omega_b, g: 100e6 }),
        ..single_mode_circuit()
    };
    base(circuit, HilbertConfig { n_keep: 100, secondary_mode_dim: 5, ..HilbertConfig::default() })
}

/// Looks up a preset by name.
pub fn preset(name: &str) -> Option<RunConfig> {
    let c = match name {
        "fig1-single-mode" => {
            let mut c = base(single_mode_circuit(), HilbertConfig::default());
            c.outputs.dynamics = false;
            c.outputs.coherence = false;
            c
        }
        "fig5-baths" => base(single_mode_circuit(), HilbertConfig::default()),
        "fig6-buffer-positive" => buffer(TWO_OMEGA_01_HZ + BUFFER_DETUNING_HZ),
        "fig10-buffer-negative" => buffer(TWO_OMEGA_01_HZ - BUFFER_DETUNING_HZ),
        "fig7-array" => {
            let circuit = CircuitConfig {
                scenario: Scenario::ArrayMode,
                array: Some(ArrayConfig { beta: 16.1, g: 100e6, include_transverse: false }),
                ..single_mode_circuit()
            };
            base(circuit, HilbertConfig { n_keep: 100, secondary_mode_dim: 4, ..HilbertConfig::default() })
        }
        "fig11-inductance" => {
            let circuit = CircuitConfig {
                scenario: Scenario::Inductance,
                e_j: 273.28e9,
                e_c: 129.87e6,
                inductor: Some(InductorConfig { e_l: 214.55e9, omega_l: 80e9 }),
                ..single_mode_circuit()
            };
            base(circuit, HilbertConfig { n_keep: 160, secondary_mode_dim: 10, ..HilbertConfig::default() })
        }
        _ => return None,
    };
    Some(c)
}
