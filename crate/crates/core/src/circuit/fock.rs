//! Fock-basis construction about the harmonic frame of the potential minimum.
//!
//! Cosine operators are evaluated exactly in a padded Fock space through the
//! eigen-decomposition of `x = a + a^dag` and truncated afterwards, which
//! keeps the retained block free of truncation artifacts.

use ndarray::{Array1, Array2};

use super::potential::{cos_terms, taylor_coefficients, TaylorCoefficients};
use super::{fix_signs, rotate, Basis, CircuitSpec, FockMap, HilbertConfig, Operators, PotentialModel, Scenario, SpectralData, Zpf};
use crate::error::Result;
use crate::linalg::{eigh_real, C64};

/// Annihilation operator on `dim` Fock states.
pub fn ladder(dim: usize) -> Array2<f64> {
    let mut a = Array2::zeros((dim, dim));
    for k in 1..dim {
        a[[k - 1, k]] = (k as f64).sqrt();
    }
    a
}

/// Position-like grid of a padded Fock space: `phi = phi0 + phi_zpf * x`.
pub struct DvrFrame {
    pub phi0: f64,
    pub phi_zpf: f64,
    pub dim: usize,
    x: Array1<f64>,
    s: Array2<f64>,
}

impl DvrFrame {
    pub fn new(phi0: f64, phi_zpf: f64, dim: usize, pad: usize) -> Result<Self> {
        let m = dim + pad;
        let a = ladder(m);
        let x_op = &a + &a.t();
        let (x, s) = eigh_real(&x_op)?;
        Ok(DvrFrame { phi0, phi_zpf, dim, x, s })
    }

    /// `f(phi)` as a `dim x dim` matrix.
    pub fn function(&self, f: impl Fn(f64) -> f64) -> Array2<f64> {
        let vals = self.x.mapv(|x| f(self.phi0 + self.phi_zpf * x));
        let scaled = &self.s * &vals.view().insert_axis(ndarray::Axis(0));
        let full = scaled.dot(&self.s.t());
        full.slice(ndarray::s![..self.dim, ..self.dim]).to_owned()
    }

    /// `(a^dag - a)^2` truncated from the padded space; `n^2 = -n_zpf^2` times this.
    pub fn momentum_squared(&self) -> Array2<f64> {
        let a = ladder(self.dim + 1);
        let d = &a.t() - &a;
        let sq = d.dot(&d);
        sq.slice(ndarray::s![..self.dim, ..self.dim]).to_owned()
    }
}

/// Real-valued SNAIL Hamiltonian in the Fock basis together with its frame.
pub(crate) struct SnailFock {
    pub taylor: TaylorCoefficients,
    pub frame: DvrFrame,
    pub h: Array2<f64>,
}

pub(crate) fn snail_hamiltonian(spec: &CircuitSpec, n_fock: usize, pad: usize) -> Result<SnailFock> {
    let taylor = taylor_coefficients(spec, 6)?;
    let frame = DvrFrame::new(taylor.phi_min, taylor.phi_zpf, n_fock, pad)?;
    let n_zpf = taylor.n_zpf;
    let mut h = frame.momentum_squared() * (-4.0 * spec.e_c * n_zpf * n_zpf);
    match spec.potential {
        PotentialModel::Full => {
            for t in cos_terms(spec) {
                h = h + frame.function(|p| -spec.e_j * t.amp * (t.freq * p + t.phase).cos());
            }
        }
        PotentialModel::Harmonic => {
            let c2 = taylor.c[2];
            let phi_min = taylor.phi_min;
            h = h + frame.function(|p| 0.5 * spec.e_j * c2 * (p - phi_min).powi(2));
        }
    }
    Ok(SnailFock { taylor, frame, h })
}

/// SNAIL charge `n = i n_zpf (a^dag - a)` on `dim` Fock states.
pub(crate) fn charge_operator(dim: usize, n_zpf: f64) -> Array2<C64> {
    let a = ladder(dim);
    (&a.t() - &a).mapv(|x| C64::new(0.0, n_zpf * x))
}

pub fn build_single_mode_fock(spec: &CircuitSpec, cfg: &HilbertConfig) -> Result<SpectralData> {
    let core = snail_hamiltonian(spec, cfg.n_fock, cfg.fock_pad)?;
    let (e, mut v) = eigh_real(&core.h)?;
    fix_signs(&mut v);
    let keep = cfg.n_keep;
    let energies = e.slice(ndarray::s![..keep]).to_owned();
    let states = v.slice(ndarray::s![.., ..keep]).mapv(|x| C64::new(x, 0.0));
    let tay = &core.taylor;
    let a_f = ladder(cfg.n_fock).mapv(|x| C64::new(x, 0.0));
    let phi_f = (&a_f + &a_f.t()) * C64::new(tay.phi_zpf, 0.0)
        + Array2::<C64>::eye(cfg.n_fock) * C64::new(tay.phi_min, 0.0);
    let n_f = charge_operator(cfg.n_fock, tay.n_zpf);
    let ops = Operators {
        n: rotate(&states, &n_f),
        phi: Some(rotate(&states, &phi_f)),
        a: Some(rotate(&states, &a_f)),
        secondary_charge: None,
        secondary_a: None,
    };
    Ok(SpectralData {
        scenario: Scenario::SingleMode,
        basis: Basis::Fock,
        energies,
        states,
        labels: (0..keep).map(|i| (i, 0)).collect(),
        ops,
        zpf: Zpf { phi_zpf: tay.phi_zpf, n_zpf: tay.n_zpf },
        phi_min: tay.phi_min,
        fock_map: Some(FockMap { snail: Array2::eye(cfg.n_fock), secondary_dim: 1 }),
        warnings: vec![],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{build_single_mode, harmonic_frame};
    use crate::linalg::{hermiticity_residual, orthonormality_residual};
    use crate::units::to_hz;

    #[test]
    fn dvr_reproduces_polynomials() {
        let f = DvrFrame::new(0.3, 0.7, 20, 40).unwrap();
        let x2 = f.function(|p| ((p - 0.3) / 0.7).powi(2));
        let a = ladder(60);
        let xx = (&a + &a.t()).dot(&(&a + &a.t()));
        for i in 0..20 {
            for j in 0..20 {
                assert!((x2[[i, j]] - xx[[i, j]]).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn fig1_single_mode_invariants() {
        let cfg = HilbertConfig { n_fock: 120, n_keep: 40, ..Default::default() };
        let sd = build_single_mode(&CircuitSpec::fig1(), &cfg).unwrap();
        assert!(orthonormality_residual(&sd.states) < 1e-10);
        assert!(hermiticity_residual(&sd.ops.n) < 1e-10);
        assert!(hermiticity_residual(sd.ops.phi.as_ref().unwrap()) < 1e-10);
        assert!(sd.energies.windows(2).into_iter().all(|w| w[0] <= w[1]));
        let w01 = to_hz(sd.energies[1] - sd.energies[0]) / 1e9;
        assert!((w01 - 6.0924795).abs() < 1e-6, "w01 = {w01}");
    }

    #[test]
    fn harmonic_diagnostic_is_equally_spaced() {
        let mut spec = CircuitSpec::fig1();
        spec.potential = PotentialModel::Harmonic;
        let cfg = HilbertConfig { n_fock: 60, n_keep: 20, ..Default::default() };
        let sd = build_single_mode(&spec, &cfg).unwrap();
        let t = crate::circuit::taylor_coefficients(&spec, 4).unwrap();
        let (omega, _) = harmonic_frame(spec.e_c, spec.e_j * t.c[2]);
        for k in 1..20 {
            let gap = sd.energies[k] - sd.energies[k - 1];
            assert!((gap / omega - 1.0).abs() < 1e-10);
        }
    }
}
