//! Order of the leading buffer coupling between two squeezed-Kerr states.

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use super::{annihilation, EffectiveHamiltonian};
use crate::error::{invalid, Error, Result};
use crate::linalg::{dagger, C64};

/// `|phi_zpf^{3k-2} Pi^{k-1} <phi_mu| a^dag^{2k} |phi_nu>|` over `k`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrderScan {
    pub entries: Vec<(u32, f64)>,
    pub argmax: u32,
}

/// Tail weight above which the truncation is considered too small for a state.
const TAIL_TOL: f64 = 1e-8;

pub fn buffer_coupling_order_scan(
    h: &EffectiveHamiltonian,
    mu: usize,
    nu: usize,
    k_range: std::ops::RangeInclusive<u32>,
) -> Result<OrderScan> {
    let dim = h.dim();
    if *k_range.start() == 0 || k_range.is_empty() {
        return invalid("order scan needs k >= 1");
    }
    for &m in &[mu, nu] {
        if m >= dim {
            return Err(Error::Dimension(format!("level {m} outside the {dim}-state truncation")));
        }
        let tail: f64 = h.states.column(m).iter().skip(dim - dim / 10).map(|z| z.norm_sqr()).sum();
        if tail > TAIL_TOL {
            return Err(Error::Dimension(format!("level {m} has tail weight {tail:.2e} at the truncation edge")));
        }
    }
    let k_max = *k_range.end() as usize;
    // Pad so that a^dag^{2k} acting on the truncated state is exact.
    let big = dim + 2 * k_max;
    let ad = dagger(&annihilation(big));
    let embed = |m: usize| {
        let mut v = ndarray::Array1::<C64>::zeros(big);
        v.slice_mut(ndarray::s![..dim]).assign(&h.states.column(m));
        v
    };
    let (bra, mut ket) = (embed(mu), embed(nu));
    let (phi, pi) = (h.params.osc.phi_zpf, h.params.pi.norm());
    let mut entries = vec![];
    let ad2: Array2<C64> = ad.dot(&ad);
    for k in 1..=k_max as u32 {
        ket = ad2.dot(&ket);
        if k < *k_range.start() {
            continue;
        }
        let amp: C64 = bra.iter().zip(ket.iter()).map(|(a, b)| a.conj() * b).sum();
        let value = phi.powi(3 * k as i32 - 2) * pi.powi(k as i32 - 1) * amp.norm();
        entries.push((k, value));
    }
    let argmax = entries.iter().fold((0, f64::NEG_INFINITY), |m, &(k, v)| if v > m.1 { (k, v) } else { m }).0;
    Ok(OrderScan { entries, argmax })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::floquet::DriveSpec;
    use crate::perturbation::{effective_hamiltonian, resonant_drive_frequency, OscillatorParams};

    fn osc() -> OscillatorParams {
        OscillatorParams { omega_0: 6.0, g3: -0.024, g4: -0.0006, phi_zpf: 0.27 }
    }

    #[test]
    fn undriven_scan_has_only_first_order() {
        let o = osc();
        let h = effective_hamiltonian(&o, &DriveSpec::new(0.0, 2.0 * o.omega_0), 40).unwrap();
        let s = buffer_coupling_order_scan(&h, 17, 7, 1..=6).unwrap();
        assert!(s.entries.iter().all(|&(k, v)| if k == 1 { true } else { v == 0.0 }));
    }

    #[test]
    fn phi_zpf_power_law() {
        let o = osc();
        let w = resonant_drive_frequency(&o, 1.0).unwrap();
        let h = effective_hamiltonian(&o, &DriveSpec::new(1.0, w), 60).unwrap();
        let s1 = buffer_coupling_order_scan(&h, 17, 7, 1..=5).unwrap();
        let mut h2 = h.clone();
        h2.params.osc.phi_zpf *= 2.0;
        let s2 = buffer_coupling_order_scan(&h2, 17, 7, 1..=5).unwrap();
        assert!((s2.entries[2].1 / s1.entries[2].1 - 128.0).abs() < 1e-9);
    }

    #[test]
    fn truncation_is_checked() {
        let o = osc();
        let w = resonant_drive_frequency(&o, 2.0).unwrap();
        let h = effective_hamiltonian(&o, &DriveSpec::new(2.0, w), 20).unwrap();
        assert!(matches!(buffer_coupling_order_scan(&h, 17, 7, 1..=5), Err(Error::Dimension(_))));
    }
}
