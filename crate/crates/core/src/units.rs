//! Physical constants and frequency conversions.
//!
//! Energies are stored as angular frequencies in rad/s; times are in seconds.

pub const TWO_PI: f64 = std::f64::consts::TAU;
pub const HBAR: f64 = 1.054_571_817e-34;
pub const K_B: f64 = 1.380_649e-23;

/// Angular frequency (rad/s) from an ordinary frequency in Hz.
pub fn from_hz(f: f64) -> f64 {
    TWO_PI * f
}

/// Ordinary frequency in Hz from an angular frequency.
pub fn to_hz(w: f64) -> f64 {
    w / TWO_PI
}

pub fn ghz(f: f64) -> f64 {
    from_hz(f * 1e9)
}

pub fn mhz(f: f64) -> f64 {
    from_hz(f * 1e6)
}

pub fn khz(f: f64) -> f64 {
    from_hz(f * 1e3)
}

/// Bose-Einstein occupation at angular frequency `w` > 0 and temperature `t` (K).
pub fn n_thermal(w: f64, t: f64) -> f64 {
    if t <= 0.0 || w <= 0.0 {
        return 0.0;
    }
    let x = HBAR * w / (K_B * t);
    1.0 / x.exp_m1()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conversions_round_trip() {
        assert!((to_hz(ghz(6.094)) - 6.094e9).abs() < 1e-3);
        assert!((mhz(1.0) / khz(1.0) - 1000.0).abs() < 1e-12);
    }

    #[test]
    fn thermal_occupation_limits() {
        assert_eq!(n_thermal(ghz(6.0), 0.0), 0.0);
        // High-temperature limit n ~ kT / hbar w.
        let w = mhz(1.0);
        let t = 1.0;
        let n = n_thermal(w, t);
        assert!((n * HBAR * w / (K_B * t) - 1.0).abs() < 1e-3);
    }
}
