//! Second-order Schrieffer-Wolff expansion of the driven oscillator in
//! Shirley space.
//!
//! The drive is removed by a time-dependent displacement, the frame rotates
//! at `omega_d / 2`, and the remaining Hamiltonian is block-diagonalized in
//! the replica index. The result is a squeezed Kerr oscillator `H_F^d` whose
//! eigenpairs give lab-frame quasienergies and Floquet matrix elements in
//! closed form. This is an oracle for the exact Floquet engine, not a
//! production path.

mod elements;
mod scan;

pub use elements::{
    a_tilde, analytic_matrix_elements, floquet_matrix_element, generator_first_order, p_tilde, MatrixElement,
    SHIRLEY_ORDER,
};
pub use scan::{buffer_coupling_order_scan, OrderScan};

use ndarray::{Array1, Array2, Axis};
use serde::{Deserialize, Serialize};

use crate::circuit::ladder;
use crate::circuit::TaylorCoefficients;
use crate::error::{invalid, Error, Result};
use crate::floquet::DriveSpec;
use crate::linalg::{eigh, C64};

/// Oscillator parameters entering the expansion.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OscillatorParams {
    pub omega_0: f64,
    pub g3: f64,
    pub g4: f64,
    pub phi_zpf: f64,
}

impl OscillatorParams {
    pub fn from_taylor(t: &TaylorCoefficients) -> Self {
        OscillatorParams { omega_0: t.omega_0, g3: t.g3(), g4: t.g4(), phi_zpf: t.phi_zpf }
    }
}

/// Coefficients of `H_F^d` in the displaced, rotating frame.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DisplacedFrameParams {
    pub osc: OscillatorParams,
    pub omega_d: f64,
    pub pi: C64,
    /// Second-order frequency shift `Delta`.
    pub delta: f64,
    pub kerr: f64,
    pub eps2: C64,
}

impl DisplacedFrameParams {
    /// `omega_0 - omega_d / 2 + Delta`.
    pub fn detuning(&self) -> f64 {
        self.osc.omega_0 - 0.5 * self.omega_d + self.delta
    }
}

/// `Pi = eps_d omega_d e^{-i lambda} / [2 i phi_zpf (omega_0^2 - omega_d^2)]`.
pub fn displacement_coefficient(osc: &OscillatorParams, drive: &DriveSpec) -> C64 {
    let num = C64::from_polar(drive.eps_d * drive.omega_d, -drive.phase);
    let den = C64::new(0.0, 2.0 * osc.phi_zpf * (osc.omega_0.powi(2) - drive.omega_d.powi(2)));
    num / den
}

/// `K = -3 g4 / 2 + 10 g3^2 / (3 omega_0)`.
pub fn kerr(osc: &OscillatorParams) -> f64 {
    -1.5 * osc.g4 + 10.0 * osc.g3.powi(2) / (3.0 * osc.omega_0)
}

/// `Delta = 3 g4 (1 + 2|Pi|^2) - 4 g3^2 [(5 + 6|Pi|^2)/(3 omega_0) + |Pi|^2/(2 omega_0 + omega_d)]`.
pub fn frequency_shift(osc: &OscillatorParams, pi_abs2: f64, omega_d: f64) -> f64 {
    3.0 * osc.g4 * (1.0 + 2.0 * pi_abs2)
        - 4.0
            * osc.g3.powi(2)
            * ((5.0 + 6.0 * pi_abs2) / (3.0 * osc.omega_0) + pi_abs2 / (2.0 * osc.omega_0 + omega_d))
}

pub fn displaced_frame_params(osc: &OscillatorParams, drive: &DriveSpec) -> Result<DisplacedFrameParams> {
    drive.validate()?;
    let pi = displacement_coefficient(osc, drive);
    if pi.norm() >= 1.0 {
        return Err(Error::PiOutOfRange(pi.norm()));
    }
    Ok(DisplacedFrameParams {
        osc: *osc,
        omega_d: drive.omega_d,
        pi,
        delta: frequency_shift(osc, pi.norm_sqr(), drive.omega_d),
        kerr: kerr(osc),
        eps2: osc.g3 * pi,
    })
}

/// Drive frequency with vanishing detuning, `omega_d / 2 = omega_0 + Delta(omega_d)`.
pub fn resonant_drive_frequency(osc: &OscillatorParams, eps_d: f64) -> Result<f64> {
    let mut w = 2.0 * osc.omega_0;
    for _ in 0..200 {
        let p = displaced_frame_params(osc, &DriveSpec::new(eps_d, w))?;
        let next = 2.0 * (osc.omega_0 + p.delta);
        if (next - w).abs() <= 1e-12 * w {
            return Ok(next);
        }
        w = next;
    }
    Err(Error::NotConverged { what: "resonant drive frequency", detail: format!("last iterate {w}") })
}

/// Truncated `H_F^d` with eigenpairs labeled by `parity_eigenpairs`.
#[derive(Clone, Debug)]
pub struct EffectiveHamiltonian {
    pub params: DisplacedFrameParams,
    pub matrix: Array2<C64>,
    pub energies: Array1<f64>,
    /// Eigenvectors as columns in the Fock basis.
    pub states: Array2<C64>,
}

impl EffectiveHamiltonian {
    pub fn dim(&self) -> usize {
        self.energies.len()
    }

    /// Lab-frame quasienergies from `fold_to_lab` with parity `mu mod 2`.
    pub fn lab_quasienergies(&self) -> Vec<f64> {
        self.energies
            .iter()
            .enumerate()
            .map(|(mu, &e)| fold_to_lab(e, Parity::of(mu), self.params.omega_d))
            .collect()
    }
}

/// `(w a^dag a - K a^dag^2 a^2 + eps2 a^dag^2 + conj(eps2) a^2)` on `dim` Fock states.
pub fn squeezed_kerr_matrix(w: f64, kerr: f64, eps2: C64, dim: usize) -> Array2<C64> {
    let mut h = Array2::<C64>::zeros((dim, dim));
    for n in 0..dim {
        let nf = n as f64;
        h[[n, n]] = C64::new(w * nf - kerr * nf * (nf - 1.0), 0.0);
        if n + 2 < dim {
            let s = ((nf + 1.0) * (nf + 2.0)).sqrt();
            h[[n + 2, n]] = eps2 * s;
            h[[n, n + 2]] = eps2.conj() * s;
        }
    }
    h
}

/// Descending eigenpairs of a Hermitian matrix.
pub(crate) fn descending_eigenpairs(h: &Array2<C64>) -> Result<(Array1<f64>, Array2<C64>)> {
    let (vals, vecs) = eigh(h)?;
    let n = vals.len();
    let order: Vec<usize> = (0..n).rev().collect();
    Ok((Array1::from_iter(order.iter().map(|&i| vals[i])), vecs.select(Axis(1), &order)))
}

/// Eigenpairs of a parity-conserving `H` on Fock states, labeled so that
/// `mu = 2j` is the `j`-th highest even state and `mu = 2j + 1` the `j`-th
/// highest odd state.
///
/// Phases follow the cat ladder: `<phi_{mu-1}| a |phi_mu>` is real and
/// positive for even `mu` and has the phase of `alpha = sqrt(eps2)` for odd `mu`.
pub fn parity_eigenpairs(h: &Array2<C64>, eps2: C64) -> Result<(Array1<f64>, Array2<C64>)> {
    let n = h.nrows();
    let mut sectors = vec![];
    for p in 0..2 {
        let idx: Vec<usize> = (p..n).step_by(2).collect();
        let sub = h.select(Axis(0), &idx).select(Axis(1), &idx);
        let (e, v) = descending_eigenpairs(&sub)?;
        sectors.push((idx, e, v));
    }
    let mut energies = Vec::with_capacity(n);
    let mut states = Array2::<C64>::zeros((n, n));
    let mut col = 0;
    for j in 0..n {
        for (idx, e, v) in &sectors {
            if j < e.len() {
                energies.push(e[j]);
                for (r, &i) in idx.iter().enumerate() {
                    states[[i, col]] = v[[r, j]];
                }
                col += 1;
            }
        }
    }
    let a = annihilation(n);
    let alpha_phase = if eps2.norm() > 0.0 { C64::from_polar(1.0, 0.5 * eps2.arg()) } else { C64::new(1.0, 0.0) };
    for mu in 0..n {
        let col = states.column(mu).to_owned();
        let reference = if mu == 0 {
            C64::new(0.0, 0.0)
        } else {
            let target = if mu % 2 == 1 { alpha_phase } else { C64::new(1.0, 0.0) };
            let prev = states.column(mu - 1);
            prev.iter().zip(a.dot(&col).iter()).map(|(p, x)| p.conj() * x).sum::<C64>() * target.conj()
        };
        let z = if reference.norm() > 1e-8 {
            reference
        } else {
            col.iter().copied().fold(C64::new(0.0, 0.0), |m, z| if z.norm() > m.norm() + 1e-12 { z } else { m })
        };
        if z.norm() > 0.0 {
            let phase = z.conj() / z.norm();
            states.column_mut(mu).mapv_inplace(|x| x * phase);
        }
    }
    Ok((Array1::from(energies), states))
}

/// Builds `H_F^d` on `dim` Fock states.
pub fn effective_hamiltonian(osc: &OscillatorParams, drive: &DriveSpec, dim: usize) -> Result<EffectiveHamiltonian> {
    if dim < 4 {
        return invalid(format!("H_F^d needs at least 4 Fock states, got {dim}"));
    }
    let params = displaced_frame_params(osc, drive)?;
    let matrix = squeezed_kerr_matrix(params.detuning(), params.kerr, params.eps2, dim);
    let (energies, states) = parity_eigenpairs(&matrix, params.eps2)?;
    Ok(EffectiveHamiltonian { params, matrix, energies, states })
}

/// Annihilation operator on `dim` Fock states.
pub(crate) fn annihilation(dim: usize) -> Array2<C64> {
    ladder(dim).mapv(|x| C64::new(x, 0.0))
}

/// Parity of a branch index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(mu: usize) -> Self {
        if mu % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

/// Lab-frame quasienergy of a displaced-frame eigenvalue.
///
/// Even: `((e + omega_d/2) mod omega_d) - omega_d/2`; odd: `(e mod omega_d/2) - omega_d/2`.
pub fn fold_to_lab(e: f64, parity: Parity, omega_d: f64) -> f64 {
    match parity {
        Parity::Even => (e + 0.5 * omega_d).rem_euclid(omega_d) - 0.5 * omega_d,
        Parity::Odd => e.rem_euclid(0.5 * omega_d) - 0.5 * omega_d,
    }
}

/// `x` reduced to `[-period/2, period/2)`.
pub fn wrap_symmetric(x: f64, period: f64) -> f64 {
    (x + 0.5 * period).rem_euclid(period) - 0.5 * period
}
