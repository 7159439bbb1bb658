//! Time evolution and the spectral gap of the Liouvillian.

use ndarray::{Array1, Array2};

use super::superop::Liouvillian;
use crate::error::{Error, Result};
use crate::linalg::{eigh, expm_with, hermitize, C64};

/// Density matrices at the requested times.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Array2<C64>>,
}

impl Trajectory {
    /// Largest `|tr rho(t) - tr rho(0)|` along the trajectory.
    pub fn max_trace_drift(&self, reference: f64) -> f64 {
        self.states.iter().map(|r| (r.diag().iter().map(|z| z.re).sum::<f64>() - reference).abs()).fold(0.0, f64::max)
    }

    /// Smallest eigenvalue of any `rho(t)`.
    pub fn min_eigenvalue(&self) -> Result<f64> {
        let mut m = f64::INFINITY;
        for r in &self.states {
            m = m.min(eigh(r)?.0[0]);
        }
        Ok(m)
    }
}

fn check_state(rho: &Array2<C64>, n: usize) -> Result<()> {
    if rho.dim() != (n, n) {
        return Err(Error::Dimension(format!("state is {:?}, Liouvillian acts on {n}x{n}", rho.dim())));
    }
    let herm = crate::linalg::hermiticity_residual(rho);
    if herm > 1e-8 {
        return Err(Error::InvalidInput(format!("initial state is not Hermitian (residual {herm:.2e})")));
    }
    let tr: f64 = rho.diag().iter().map(|z| z.re).sum();
    if (tr - 1.0).abs() > 1e-8 {
        return Err(Error::InvalidInput(format!("initial state has trace {tr}")));
    }
    let min = eigh(rho)?.0[0];
    if min < -1e-8 {
        return Err(Error::InvalidInput(format!("initial state is not positive (min eigenvalue {min:.2e})")));
    }
    Ok(())
}

/// Residual column sums of the population rows of a block propagator above
/// this are left in place.
const TRACE_REPAIR_MAX: f64 = 1e-8;

/// The exact propagator maps populations to unit trace and coherences to zero
/// trace; rounding residuals in its population-row column sums are moved onto
/// the column's own population, or the first population for coherences.
fn restore_trace(p: &mut Array2<C64>, indices: &[usize], diagonal: &[usize], n: usize) {
    let Some(&first) = diagonal.first() else { return };
    for c in 0..indices.len() {
        let own = indices[c] / n == indices[c] % n;
        let target = if own { 1.0 } else { 0.0 };
        let sum: C64 = diagonal.iter().map(|&r| p[[r, c]]).sum();
        let residual = C64::new(target, 0.0) - sum;
        if residual.norm() < TRACE_REPAIR_MAX {
            p[[if own { c } else { first }, c]] += residual;
        }
    }
}

/// `rho(t) = exp(L t) rho0`, block by block. Outputs are symmetrized.
pub fn evolve(rho0: &Array2<C64>, l: &Liouvillian, times: &[f64]) -> Result<Trajectory> {
    let n = l.dim;
    check_state(rho0, n)?;
    let flat: Vec<C64> = rho0.iter().copied().collect();
    let mut out = vec![vec![C64::new(0.0, 0.0); n * n]; times.len()];
    for b in &l.blocks {
        let x0 = Array1::from_iter(b.indices.iter().map(|&i| flat[i]));
        if x0.iter().all(|z| z.norm() == 0.0) {
            continue;
        }
        match &b.modes {
            Some((v, vinv)) => {
                let c = vinv.dot(&x0);
                for (ti, &t) in times.iter().enumerate() {
                    let ct = Array1::from_iter(c.iter().zip(b.eigenvalues.iter()).map(|(&ci, &l)| ci * (l * t).exp()));
                    let x = v.dot(&ct);
                    for (&i, &val) in b.indices.iter().zip(x.iter()) {
                        out[ti][i] = val;
                    }
                }
            }
            None => {
                let diagonal: Vec<usize> = (0..b.indices.len()).filter(|&p| b.indices[p] / n == b.indices[p] % n).collect();
                for (ti, &t) in times.iter().enumerate() {
                    let x = expm_with(&(&b.matrix * C64::new(t, 0.0)), &mut |p| restore_trace(p, &b.indices, &diagonal, n))?.dot(&x0);
                    for (&i, &val) in b.indices.iter().zip(x.iter()) {
                        out[ti][i] = val;
                    }
                }
            }
        }
    }
    let states = out
        .into_iter()
        .map(|v| hermitize(&Array2::from_shape_vec((n, n), v).expect("square")))
        .collect();
    Ok(Trajectory { times: times.to_vec(), states })
}

/// Slowest nonzero relaxation rate of the Liouvillian.
#[derive(Clone, Debug, PartialEq)]
pub struct GapResult {
    /// `min |Re lambda|` over eigenvalues outside the zero cluster; 0 when none.
    pub gap: f64,
    /// Eigenvalues treated as zero.
    pub zero_count: usize,
    pub degenerate_kernel: bool,
    /// With a degenerate kernel: the gap above the whole zero cluster, and
    /// the gap if only the smallest eigenvalue were the steady state.
    pub candidates: Option<(f64, f64)>,
}

/// Zero eigenvalues are those below `1e-3` times the next one in magnitude.
pub fn liouvillian_gap(l: &Liouvillian) -> GapResult {
    let mut ev = l.eigenvalues();
    ev.sort_by(|a, b| a.norm().total_cmp(&b.norm()));
    let split = (1..ev.len()).find(|&i| ev[i - 1].norm() < 1e-3 * ev[i].norm()).unwrap_or(ev.len());
    let min_re = |from: usize| ev[from..].iter().map(|z| z.re.abs()).fold(f64::INFINITY, f64::min);
    let gap = if split < ev.len() { min_re(split) } else { 0.0 };
    let degenerate_kernel = split != 1;
    let candidates = (degenerate_kernel && ev.len() > 1).then(|| (gap, min_re(1)));
    GapResult { gap, zero_count: split, degenerate_kernel, candidates }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lindblad::{JumpOperator, LindbladianRep};
    use crate::linalg::max_abs;

    fn decay(rate: f64) -> LindbladianRep {
        LindbladianRep {
            dim: 2,
            jumps: vec![JumpOperator { channel: 0, class: 0, delta: -1.0, rate, terms: vec![(0, 1, C64::new(1.0, 0.0))] }],
        }
    }

    fn excited() -> Array2<C64> {
        let mut r = Array2::zeros((2, 2));
        r[[1, 1]] = C64::new(1.0, 0.0);
        r
    }

    #[test]
    fn zero_generator_is_static() {
        let rep = LindbladianRep::zero(3);
        let l = Liouvillian::new(&rep).unwrap();
        let mut rho = Array2::<C64>::eye(3) / C64::new(3.0, 0.0);
        rho[[0, 1]] = C64::new(0.1, 0.05);
        rho[[1, 0]] = C64::new(0.1, -0.05);
        let tr = evolve(&rho, &l, &[0.0, 1.0, 100.0]).unwrap();
        for s in &tr.states {
            assert!(max_abs(&(s - &rho)) < 1e-15);
        }
        let g = liouvillian_gap(&l);
        assert_eq!(g.gap, 0.0);
        assert!(g.degenerate_kernel);
    }

    #[test]
    fn amplitude_damping_population_and_gap() {
        let k = 0.7;
        let l = Liouvillian::new(&decay(k)).unwrap();
        let times = [0.0, 0.5, 2.0, 5.0];
        let tr = evolve(&excited(), &l, &times).unwrap();
        for (s, &t) in tr.states.iter().zip(&times) {
            assert!((s[[1, 1]].re - (-k * t).exp()).abs() < 1e-13);
        }
        assert!(tr.max_trace_drift(1.0) < 1e-14);
        let g = liouvillian_gap(&l);
        assert!((g.gap - k / 2.0).abs() < 1e-14);
        assert!(!g.degenerate_kernel);
    }

    #[test]
    fn superoperator_matches_dense_generator() {
        let mut rep = decay(0.3);
        rep.dim = 3;
        rep.jumps.push(JumpOperator {
            channel: 0,
            class: 1,
            delta: 2.0,
            rate: 0.2,
            terms: vec![(2, 1, C64::new(0.3, 0.4)), (1, 0, C64::new(-0.5, 0.1))],
        });
        let l = Liouvillian::new(&rep).unwrap();
        let rho = Array2::from_shape_fn((3, 3), |(a, b)| C64::new((a + 2 * b) as f64, a as f64 - b as f64));
        assert!(max_abs(&(l.apply(&rho) - rep.apply(&rho))) < 1e-14);
    }

    #[test]
    fn disconnected_steady_states_are_flagged() {
        // Two decoupled decaying pairs: 1 -> 0 and 3 -> 2.
        let one = C64::new(1.0, 0.0);
        let rep = LindbladianRep {
            dim: 4,
            jumps: vec![
                JumpOperator { channel: 0, class: 0, delta: -1.0, rate: 1.0, terms: vec![(0, 1, one)] },
                JumpOperator { channel: 0, class: 1, delta: -2.0, rate: 2.0, terms: vec![(2, 3, one)] },
            ],
        };
        let g = liouvillian_gap(&Liouvillian::new(&rep).unwrap());
        assert!(g.degenerate_kernel);
        assert!(g.zero_count >= 2);
    }

    #[test]
    fn invalid_initial_state_is_rejected() {
        let l = Liouvillian::new(&decay(1.0)).unwrap();
        assert!(evolve(&Array2::eye(2), &l, &[1.0]).is_err());
    }

    #[test]
    fn stiff_rate_propagator_keeps_unit_column_sums() {
        // Populations of a 3x3 state, rates spanning seven decades.
        let (k1, k2, k3) = (3e5, 2e-2, 7.0);
        let w = Array2::from_shape_vec(
            (3, 3),
            vec![-k1, k2, 0.0, k1, -k2 - k3, k3 * 0.5, 0.0, k3, -k3 * 0.5],
        )
        .unwrap()
        .mapv(|x| C64::new(x, 0.0));
        let indices = [0, 4, 8];
        let diagonal = [0, 1, 2];
        let p = expm_with(&(&w * C64::new(40.0, 0.0)), &mut |p| restore_trace(p, &indices, &diagonal, 3)).unwrap();
        for c in 0..3 {
            let sum: f64 = (0..3).map(|r| p[[r, c]].re).sum();
            assert!((sum - 1.0).abs() < 1e-15, "column {c}: {sum}");
        }
        let plain = crate::linalg::expm(&(&w * C64::new(40.0, 0.0))).unwrap();
        assert!(crate::linalg::max_abs(&(&p - &plain)) < 1e-8);
    }
}
