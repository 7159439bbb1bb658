//! Charge-basis construction on the fractional charge lattice.
//!
//! With `N` large junctions the potential is `2 pi N` periodic in phase, so
//! the conjugate charge lives on the lattice `n = k / N`. A term
//! `cos(f phi + theta)` becomes a shift by `f N` lattice sites.

use ndarray::Array2;

use super::potential::{cos_terms, taylor_coefficients};
use super::{Basis, CircuitSpec, HilbertConfig, Operators, PotentialModel, Scenario, SpectralData, Zpf};
use crate::error::{invalid, Result};
use crate::linalg::{eigh_banded_lowest, C64};

pub fn build_single_mode_charge(spec: &CircuitSpec, cfg: &HilbertConfig) -> Result<SpectralData> {
    if spec.potential != PotentialModel::Full {
        return invalid("the charge basis supports only the full cosine potential");
    }
    let nl = spec.n_large_junctions as i64;
    let kmax = nl * cfg.n_charge_max as i64;
    let dim = (2 * kmax + 1) as usize;
    let terms = cos_terms(spec);
    let mut shifts = vec![];
    for t in &terms {
        let s = t.freq * nl as f64;
        if (s - s.round()).abs() > 1e-12 || s.round() < 1.0 {
            return invalid(format!("cosine frequency {} is not commensurate with the charge lattice", t.freq));
        }
        shifts.push(s.round() as usize);
    }
    let kd = *shifts.iter().max().unwrap();
    let mut upper = vec![vec![C64::new(0.0, 0.0); dim]; kd + 1];
    for d in 1..=kd {
        upper[d].truncate(dim - d);
    }
    for (j, x) in upper[0].iter_mut().enumerate() {
        let n = (j as i64 - kmax) as f64 / nl as f64;
        *x = C64::new(4.0 * spec.e_c * n * n, 0.0);
    }
    for (t, &s) in terms.iter().zip(&shifts) {
        // -A E_J cos(f phi + th) = -(A E_J / 2)(e^{i th} e^{i f phi} + h.c.),
        // with e^{i f phi}|k> = |k + s>; the upper entry A[j, j+s] is the conjugate.
        let amp = C64::from_polar(-0.5 * t.amp * spec.e_j, -t.phase);
        for x in upper[s].iter_mut() {
            *x += amp;
        }
    }
    let keep = cfg.n_keep.min(dim);
    let (energies, states) = eigh_banded_lowest(&upper, keep)?;
    let n_diag: Vec<f64> = (0..dim).map(|j| (j as i64 - kmax) as f64 / nl as f64).collect();
    let mut n_op = Array2::<C64>::zeros((keep, keep));
    for a in 0..keep {
        for b in a..keep {
            let mut acc = C64::new(0.0, 0.0);
            for j in 0..dim {
                acc += states[[j, a]].conj() * states[[j, b]] * n_diag[j];
            }
            n_op[[a, b]] = acc;
            n_op[[b, a]] = acc.conj();
        }
    }
    let tay = taylor_coefficients(spec, 4)?;
    Ok(SpectralData {
        scenario: Scenario::SingleMode,
        basis: Basis::Charge,
        energies,
        states,
        labels: (0..keep).map(|i| (i, 0)).collect(),
        ops: Operators { n: n_op, phi: None, a: None, secondary_charge: None, secondary_a: None },
        zpf: Zpf { phi_zpf: tay.phi_zpf, n_zpf: tay.n_zpf },
        phi_min: tay.phi_min,
        fock_map: None,
        warnings: vec![],
    })
}
