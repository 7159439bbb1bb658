//! Bath channels and the rate function `kappa`.

use serde::{Deserialize, Serialize};

use crate::circuit::SpectralData;
use crate::error::{invalid, Error, Result};
use crate::linalg::C64;
use crate::units::{khz, n_thermal};
use ndarray::Array2;

/// System operator a bath couples to.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChannelOperator {
    /// `n / n_zpf = i (a^dag - a)` of the SNAIL.
    #[default]
    SnailCharge,
    /// Normalized charge `i (b^dag - b)` of the secondary mode.
    SecondaryCharge,
}

impl ChannelOperator {
    /// The operator in the dressed basis of `sd`.
    pub fn matrix(&self, sd: &SpectralData) -> Result<Array2<C64>> {
        match self {
            ChannelOperator::SnailCharge => Ok(sd.ops.p(&sd.zpf)),
            ChannelOperator::SecondaryCharge => sd
                .ops
                .secondary_charge
                .clone()
                .ok_or_else(|| Error::InvalidInput(format!("{} circuit has no secondary mode", sd.scenario))),
        }
    }
}

/// Spectral density and temperature at the harmonic `m omega_d / 2`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HarmonicValue {
    pub m: u32,
    /// Spectral density in rad/s.
    pub j: f64,
    /// Temperature in kelvin.
    pub temperature: f64,
}

/// Frequency-independent spectral density `J(omega) = theta(omega) j`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlatSpectrum {
    pub j: f64,
    pub temperature: f64,
}

/// One bath coupled to one operator.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Channel {
    #[serde(default)]
    pub operator: ChannelOperator,
    #[serde(default)]
    pub harmonics: Vec<HarmonicValue>,
    #[serde(default)]
    pub flat: Option<FlatSpectrum>,
}

impl Channel {
    pub fn harmonic(operator: ChannelOperator, values: &[(u32, f64, f64)]) -> Self {
        Channel {
            operator,
            harmonics: values.iter().map(|&(m, j, temperature)| HarmonicValue { m, j, temperature }).collect(),
            flat: None,
        }
    }

    pub fn flat(operator: ChannelOperator, j: f64, temperature: f64) -> Self {
        Channel { operator, harmonics: vec![], flat: Some(FlatSpectrum { j, temperature }) }
    }

    /// `(J, T)` at positive frequency `w`, snapping to the nearest harmonic.
    fn density(&self, w: f64, omega_d: f64) -> Result<(f64, f64)> {
        if let Some(f) = self.flat {
            return Ok((f.j, f.temperature));
        }
        let half = 0.5 * omega_d;
        let m = (w / half).round();
        if (w - m * half).abs() > 0.5 * half {
            return Err(Error::HarmonicOutOfRange { omega: w });
        }
        if m == 0.0 {
            return Ok((0.0, 0.0));
        }
        Ok(self.harmonics.iter().find(|h| h.m as f64 == m).map_or((0.0, 0.0), |h| (h.j, h.temperature)))
    }
}

/// All bath channels and the quasidegeneracy threshold (rad/s).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BathSpec {
    pub channels: Vec<Channel>,
    #[serde(default = "default_threshold")]
    pub quasideg_threshold: f64,
}

fn default_threshold() -> f64 {
    khz(100.0)
}

impl BathSpec {
    pub fn new(channels: Vec<Channel>) -> Self {
        BathSpec { channels, quasideg_threshold: default_threshold() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.channels.is_empty() {
            return invalid("bath.channels must not be empty");
        }
        if !(self.quasideg_threshold > 0.0) {
            return invalid(format!("bath.quasideg_threshold must be > 0, got {}", self.quasideg_threshold));
        }
        for (c, ch) in self.channels.iter().enumerate() {
            let mut pairs: Vec<(f64, f64, String)> = ch
                .harmonics
                .iter()
                .map(|h| (h.j, h.temperature, format!("bath.channels[{c}].harmonics[m={}]", h.m)))
                .collect();
            if let Some(f) = ch.flat {
                pairs.push((f.j, f.temperature, format!("bath.channels[{c}].flat")));
            }
            if pairs.is_empty() {
                return invalid(format!("bath.channels[{c}] defines no spectral density"));
            }
            for (j, t, path) in pairs {
                if !(j >= 0.0) {
                    return invalid(format!("{path}.j must be >= 0, got {j}"));
                }
                if !(t >= 0.0) {
                    return invalid(format!("{path}.temperature must be >= 0, got {t}"));
                }
            }
        }
        Ok(())
    }
}

/// `kappa(w) = n_th(w) J(w) + [1 + n_th(-w)] J(-w)` with `J(w < 0) = 0`.
///
/// Positive `w` is absorption from the bath, negative `w` emission.
pub fn kappa(w: f64, channel: &Channel, omega_d: f64) -> Result<f64> {
    if w == 0.0 {
        return Ok(0.0);
    }
    let a = w.abs();
    let (j, t) = channel.density(a, omega_d)?;
    let n = n_thermal(a, t);
    Ok(if w > 0.0 { n * j } else { (1.0 + n) * j })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::{ghz, HBAR, K_B};
    use proptest::prelude::*;

    #[test]
    fn zero_temperature_limits() {
        let ch = Channel::flat(ChannelOperator::SnailCharge, 2.0, 0.0);
        assert_eq!(kappa(ghz(6.0), &ch, ghz(12.0)).unwrap(), 0.0);
        assert_eq!(kappa(-ghz(6.0), &ch, ghz(12.0)).unwrap(), 2.0);
    }

    #[test]
    fn harmonic_lookup_snaps_and_defaults_to_zero() {
        let wd = ghz(12.0);
        let ch = Channel::harmonic(ChannelOperator::SnailCharge, &[(1, 5.0, 0.0), (2, 7.0, 0.0)]);
        assert_eq!(kappa(-ghz(6.3), &ch, wd).unwrap(), 5.0);
        assert_eq!(kappa(-ghz(11.0), &ch, wd).unwrap(), 7.0);
        assert_eq!(kappa(-ghz(18.0), &ch, wd).unwrap(), 0.0);
        assert_eq!(kappa(-ghz(0.5), &ch, wd).unwrap(), 0.0);
    }

    #[test]
    fn validation_names_the_field() {
        let b = BathSpec::new(vec![Channel::harmonic(ChannelOperator::SnailCharge, &[(2, 1.0, -0.1)])]);
        let msg = b.validate().unwrap_err().to_string();
        assert!(msg.contains("harmonics[m=2].temperature"), "{msg}");
    }

    proptest! {
        #[test]
        fn detailed_balance(f in 0.5f64..20.0, t in 0.01f64..1.0, j in 0.1f64..10.0) {
            let ch = Channel::flat(ChannelOperator::SnailCharge, j, t);
            let w = ghz(f);
            let up = kappa(w, &ch, ghz(12.0)).unwrap();
            let down = kappa(-w, &ch, ghz(12.0)).unwrap();
            let want = (HBAR * w / (K_B * t)).exp();
            prop_assume!(up > 1e-300);
            prop_assert!(((down / up) / want - 1.0).abs() < 1e-9);
        }
    }
}
