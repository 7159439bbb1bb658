//! Fourth-order split-operator propagation.
//!
//! Each step is a symmetric triple-jump composition of second-order Strang
//! splittings between the diagonal `H0` and the driven term `f(t) V`. The
//! state is held in the eigenbasis of `V`, where the drive factor is
//! diagonal and the `H0` factor is a dense precomputed unitary; adjacent
//! `H0` half-steps are merged so each step costs three matrix products.

use ndarray::{Array1, Array2, Axis};

use super::FloquetSystem;
use crate::error::{Error, Result};
use crate::linalg::{dagger, max_abs, C64};

/// Triple-jump weights `(w1, w0)` with `2 w1 + w0 = 1`.
/// `w1 = 1 / (2 - 2^(1/3))`, `w0 = -2^(1/3) w1`.
pub const FOURTH_ORDER_WEIGHTS: (f64, f64) = (1.351_207_191_959_657_8, -1.702_414_383_919_315_5);

/// Result of a propagation from `t = 0`.
#[derive(Clone, Debug)]
pub struct Propagation {
    /// `U(t_end, 0)` applied to the initial states.
    pub final_state: Array2<C64>,
    /// `U(t_j, 0)` applied to the initial states at `t_j = j * stride * h`.
    pub samples: Vec<Array2<C64>>,
    pub sample_times: Vec<f64>,
}

impl FloquetSystem {
    /// `W^dag exp(-i H0 tau) W`: the free evolution in the eigenbasis of `V`.
    fn free_factor(&self, tau: f64) -> Array2<C64> {
        let phases = self.energies.mapv(|e| C64::from_polar(1.0, -e * tau));
        let wd = dagger(&self.w);
        let scaled = &wd * &phases.view().insert_axis(Axis(0));
        scaled.dot(&self.w)
    }

    fn kick(&self, psi: &mut Array2<C64>, strength: f64) {
        let phases: Array1<C64> = self.v.mapv(|x| C64::from_polar(1.0, -x * strength));
        for (mut row, &p) in psi.axis_iter_mut(Axis(0)).zip(phases.iter()) {
            row.mapv_inplace(|z| z * p);
        }
    }

    /// Propagates the columns of `init` under `H0 + f(t) V` for `t` in
    /// `[0, t_end]` with `n_steps` steps, sampling every `stride` steps when
    /// `stride > 0`.
    pub fn propagate(
        &self,
        f: &dyn Fn(f64) -> f64,
        t_end: f64,
        n_steps: usize,
        init: &Array2<C64>,
        stride: usize,
    ) -> Result<Propagation> {
        if n_steps == 0 {
            return Err(Error::InvalidInput("propagation needs at least one step".into()));
        }
        let h = t_end / n_steps as f64;
        let (w1, w0) = FOURTH_ORDER_WEIGHTS;
        let m_half = self.free_factor(0.5 * w1 * h);
        let m_mid = self.free_factor(0.5 * (w1 + w0) * h);
        let m_join = self.free_factor(w1 * h);
        let m_unhalf = if stride > 0 { Some(self.free_factor(-0.5 * w1 * h)) } else { None };
        let mut psi = dagger(&self.w).dot(init);
        psi = m_half.dot(&psi);
        let mut samples = vec![];
        let mut sample_times = vec![];
        for j in 0..n_steps {
            let t = j as f64 * h;
            if stride > 0 && j % stride == 0 {
                if j == 0 {
                    samples.push(init.clone());
                } else {
                    let back = m_unhalf.as_ref().expect("sampling enabled").dot(&psi);
                    samples.push(self.w.dot(&back));
                }
                sample_times.push(t);
            }
            self.kick(&mut psi, w1 * h * f(t + 0.5 * w1 * h));
            psi = m_mid.dot(&psi);
            self.kick(&mut psi, w0 * h * f(t + w1 * h + 0.5 * w0 * h));
            psi = m_mid.dot(&psi);
            self.kick(&mut psi, w1 * h * f(t + (w1 + w0) * h + 0.5 * w1 * h));
            psi = if j + 1 == n_steps { m_half.dot(&psi) } else { m_join.dot(&psi) };
        }
        Ok(Propagation { final_state: self.w.dot(&psi), samples, sample_times })
    }

    /// One-period propagator `U(T)` with a unitarity check.
    pub fn one_period_propagator(&self, drive: &super::DriveSpec, n_steps: usize, tol: f64) -> Result<Array2<C64>> {
        drive.validate()?;
        let n = self.dim();
        let wf = drive.waveform();
        let p = self.propagate(&wf, drive.period(), n_steps, &Array2::eye(n), 0)?;
        let res = max_abs(&(dagger(&p.final_state).dot(&p.final_state) - Array2::<C64>::eye(n)));
        if res > tol {
            return Err(Error::Unitarity(res));
        }
        Ok(p.final_state)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::floquet::DriveSpec;
    use crate::linalg::{expm, hermitize};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn toy(n: usize, seed: u64) -> FloquetSystem {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let e = Array1::from_iter((0..n).map(|k| k as f64 * 1.3 + rng.gen_range(-0.2..0.2)));
        let v = Array2::from_shape_fn((n, n), |_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        FloquetSystem::new(e, hermitize(&v), None).unwrap()
    }

    #[test]
    fn weights_are_consistent() {
        let (w1, w0) = FOURTH_ORDER_WEIGHTS;
        assert!((2.0 * w1 + w0 - 1.0).abs() < 1e-15);
        assert!((2.0 * w1.powi(3) + w0.powi(3)).abs() < 1e-12);
    }

    #[test]
    fn undriven_propagator_is_diagonal_phase() {
        let sys = toy(6, 1);
        let drive = DriveSpec::new(0.0, 2.0);
        let u = sys.one_period_propagator(&drive, 16, 1e-12).unwrap();
        let t = drive.period();
        for i in 0..6 {
            for j in 0..6 {
                let want = if i == j { C64::from_polar(1.0, -sys.energies[i] * t) } else { C64::new(0.0, 0.0) };
                assert!((u[[i, j]] - want).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn static_drive_matches_matrix_exponential() {
        // omega_d -> 0 with phase 0 gives a constant drive over a short window.
        let sys = toy(5, 2);
        let eps = 0.7;
        let t_end = 0.9;
        let h = Array2::from_diag(&sys.energies.mapv(|e| C64::new(e, 0.0))) + &sys.coupling * C64::new(eps, 0.0);
        let exact = expm(&(h * C64::new(0.0, -t_end))).unwrap();
        let p = sys.propagate(&|_| eps, t_end, 256, &Array2::eye(5), 0).unwrap();
        assert!(max_abs(&(p.final_state - exact)) < 1e-9);
    }

    #[test]
    fn fourth_order_convergence() {
        let sys = toy(6, 3);
        let drive = DriveSpec::new(1.5, 3.0);
        let wf = drive.waveform();
        let run = |n| sys.propagate(&wf, drive.period(), n, &Array2::eye(6), 0).unwrap().final_state;
        let reference = run(2048);
        let e1 = max_abs(&(run(32) - &reference));
        let e2 = max_abs(&(run(64) - &reference));
        let order = (e1 / e2).log2();
        assert!(order > 3.7, "observed order {order}");
    }

    #[test]
    fn samples_match_shorter_propagations() {
        let sys = toy(4, 4);
        let drive = DriveSpec::new(0.8, 2.5);
        let wf = drive.waveform();
        let t = drive.period();
        let p = sys.propagate(&wf, t, 64, &Array2::eye(4), 16).unwrap();
        assert_eq!(p.samples.len(), 4);
        let q = sys.propagate(&wf, t / 2.0, 32, &Array2::eye(4), 0).unwrap();
        assert!(max_abs(&(&p.samples[2] - &q.final_state)) < 1e-12);
    }
}
