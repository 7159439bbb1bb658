//! First-order response to a weak probe tone.

use crate::error::{invalid, Result};
use crate::linalg::C64;
use crate::lindblad::XTensor;

/// `int_0^t cos(omega_s s) e^{i delta s} ds`.
pub fn probe_integral(delta: f64, omega_s: f64, t: f64) -> C64 {
    let term = |w: f64| {
        if (w * t).abs() < 1e-8 {
            C64::new(t, 0.5 * w * t * t)
        } else {
            (C64::from_polar(1.0, w * t) - 1.0) / C64::new(0.0, w)
        }
    };
    0.5 * (term(delta + omega_s) + term(delta - omega_s))
}

/// `|<phi_mu(t)|psi(t)>|` to first order in `zeta` for `psi(0) = (phi_0 + phi_1)/sqrt 2`
/// under the probe `zeta cos(omega_s t) p`.
///
/// `quasienergies` and `omega_d` define `Delta_{mu nu k}`; `x` holds the
/// Fourier coefficients of `p`.
pub fn probe_transition_amplitude(
    x: &XTensor,
    quasienergies: &[f64],
    omega_d: f64,
    mu: usize,
    omega_s: f64,
    zeta: f64,
    t: f64,
) -> Result<f64> {
    if mu >= x.dim() || x.dim() < 2 {
        return invalid(format!("mode {mu} is outside the {}-mode tensor", x.dim()));
    }
    let mut acc = C64::new(0.0, 0.0);
    for nu in 0..2 {
        for k in x.ks() {
            let delta = quasienergies[mu] - quasienergies[nu] + k as f64 * omega_d;
            acc += x.get(mu, nu, k) * probe_integral(delta, omega_s, t);
        }
    }
    Ok(zeta * acc.norm() / std::f64::consts::SQRT_2)
}
