//! Independent master-equation oracles shared by the integration tests.

#![allow(dead_code)]

use kerrcat::floquet::{solve_point, FloquetConfig, FloquetSystem};
use kerrcat::lindblad::{
    dissipation_from_operators, evolve, BathSpec, Channel, ChannelOperator, Liouvillian, TableOptions,
};
use kerrcat::C64;
use ndarray::{Array1, Array2};

fn driven_three_level() -> (FloquetSystem, Array2<C64>) {
    let e = Array1::from(vec![0.0, 1.0, 2.3]);
    let mut p = Array2::<C64>::zeros((3, 3));
    p[[0, 1]] = C64::new(0.0, 1.0);
    p[[1, 2]] = C64::new(0.0, 1.3);
    p[[0, 2]] = C64::new(0.0, 0.2);
    let p = &p + &p.t().mapv(|z| z.conj());
    (FloquetSystem::new(e, p.clone(), None).unwrap(), p)
}

/// Interaction-picture Redfield equation with the full double sum over
/// transitions and the exact phases `e^{i (Delta_j - Delta_i) t}`:
/// `drho/dt = sum_ij kappa_j/2 e^{i(D_j - D_i)t} (L_j rho L_i^dag - L_i^dag L_j rho) + h.c.`
fn redfield_rk4(
    deltas: &[f64],
    ls: &[Array2<C64>],
    rates: &[f64],
    rho0: &Array2<C64>,
    t_end: f64,
    dt: f64,
) -> Array2<C64> {
    let rhs = |t: f64, rho: &Array2<C64>| {
        let n = rho.nrows();
        let mut lw = Array2::<C64>::zeros((n, n));
        let mut pt = Array2::<C64>::zeros((n, n));
        for ((d, l), r) in deltas.iter().zip(ls).zip(rates) {
            let ph = C64::from_polar(1.0, d * t);
            lw.scaled_add(ph * (0.5 * r), l);
            pt.scaled_add(ph, l);
        }
        let ptd = pt.t().mapv(|z| z.conj());
        let a = lw.dot(rho).dot(&ptd) - ptd.dot(&lw).dot(rho);
        &a + &a.t().mapv(|z| z.conj())
    };
    let steps = (t_end / dt).round() as usize;
    let h = t_end / steps as f64;
    let mut rho = rho0.clone();
    let c = |x: f64| C64::new(x, 0.0);
    for s in 0..steps {
        let t = s as f64 * h;
        let k1 = rhs(t, &rho);
        let k2 = rhs(t + h / 2.0, &(&rho + &(&k1 * c(h / 2.0))));
        let k3 = rhs(t + h / 2.0, &(&rho + &(&k2 * c(h / 2.0))));
        let k4 = rhs(t + h, &(&rho + &(&k3 * c(h))));
        rho = &rho + &((&k1 + &(&k2 * c(2.0)) + &(&k3 * c(2.0)) + &k4) * c(h / 6.0));
    }
    rho
}

/// Largest population difference between the partial-secular master equation
/// and the brute-force Redfield integration on a driven three-level system.
pub fn redfield_max_deviation() -> f64 {
    let (sys, p) = driven_three_level();
    let cfg = FloquetConfig { n_steps: 256, n_samples: 32, tune_tol: 1e-10, keep_samples: true, ..Default::default() };
    let point = solve_point(&sys, 0.25, 2.0, &Array2::eye(3), &cfg, true).unwrap();
    // Unit frequencies need a matching temperature scale: hbar * 1 rad/s / k_B ~ 7.6e-12 K.
    let mut bath = BathSpec::new(vec![Channel::flat(ChannelOperator::SnailCharge, 0.004, 8e-12)]);
    bath.quasideg_threshold = 1e-4;
    let d = dissipation_from_operators(&point, &[p], &bath, &TableOptions::default()).unwrap();
    let mut rho0 = Array2::<C64>::zeros((3, 3));
    rho0[[2, 2]] = C64::new(1.0, 0.0);
    // Ten decay times of the dominant 1 -> 0 channel.
    let g10 = d.table.entry(0, 1, 0).map(|t| t.x[0].norm_sqr()).unwrap_or(0.0)
        + d.table.entry(0, 1, -1).map(|t| t.x[0].norm_sqr()).unwrap_or(0.0)
        + d.table.entry(0, 1, 1).map(|t| t.x[0].norm_sqr()).unwrap_or(0.0);
    let t_end = 10.0 / (0.004 * g10.max(0.05));
    let l = Liouvillian::new(&d.rep).unwrap();
    let lind = evolve(&rho0, &l, &[t_end]).unwrap().states.pop().unwrap();

    let table = &d.table;
    let deltas: Vec<f64> = table.entries.iter().map(|t| t.delta).collect();
    let ls: Vec<Array2<C64>> = table
        .entries
        .iter()
        .map(|t| {
            let mut m = Array2::zeros((3, 3));
            m[[t.mu, t.nu]] = t.x[0];
            m
        })
        .collect();
    let rates: Vec<f64> =
        table.entries.iter().map(|t| kerrcat::lindblad::kappa(t.delta, &bath.channels[0], point.omega_d).unwrap()).collect();
    let red = redfield_rk4(&deltas, &ls, &rates, &rho0, t_end, 0.02);
    (0..3).map(|mu| (lind[[mu, mu]].re - red[[mu, mu]].re).abs()).fold(0.0, f64::max)
}

/// Populations under the Pauli rate equation built from the same amplitudes.
fn pauli_populations(q: &[f64], x: &kerrcat::lindblad::XTensor, bath: &BathSpec, omega_d: f64, p0: &[f64], t: f64) -> Vec<f64> {
    let n = q.len();
    let mut w = Array2::<C64>::zeros((n, n));
    for k in x.ks() {
        for mu in 0..n {
            for nu in 0..n {
                if mu == nu {
                    continue;
                }
                let delta = q[mu] - q[nu] + k as f64 * omega_d;
                let r = kerrcat::lindblad::kappa(delta, &bath.channels[0], omega_d).unwrap() * x.get(mu, nu, k).norm_sqr();
                w[[mu, nu]] += r;
                w[[nu, nu]] -= r;
            }
        }
    }
    let e = kerrcat::linalg::expm(&(w * C64::new(t, 0.0))).unwrap();
    let p = Array1::from_iter(p0.iter().map(|&v| C64::new(v, 0.0)));
    e.dot(&p).iter().map(|z| z.re).collect()
}

/// Largest population difference between the master equation with a vanishing
/// quasidegeneracy threshold and the Pauli rate equation.
pub fn rate_equation_max_deviation() -> f64 {
    use kerrcat::lindblad::{assemble, build_transition_table, XTensor};
    use rand::{Rng, SeedableRng};
    let n = 5;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    let omega_d = 3.0;
    let q: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.5..1.5)).collect();
    let k_max = 2;
    let mut data = vec![Array2::<C64>::zeros((n, n)); 2 * k_max + 1];
    for k in 0..=k_max {
        for mu in 0..n {
            for nu in 0..n {
                let z = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * (0.3f64).powi(k as i32);
                if k == 0 && mu == nu {
                    data[k_max][[mu, mu]] = C64::new(z.re, 0.0);
                } else if k > 0 || mu < nu {
                    data[k_max + k][[mu, nu]] = z;
                    data[k_max - k][[nu, mu]] = z.conj();
                }
            }
        }
    }
    let x = XTensor { k_max, data };
    let point = kerrcat::floquet::FloquetPoint {
        eps_d: 0.1,
        omega_d,
        quasienergies: Array1::from(q.clone()),
        modes_t0: Array2::eye(n),
        mode_samples: vec![],
        labels: (0..n).collect(),
        tracking_fidelity: Array1::ones(n),
        partner: vec![(0, 0.0); n],
        lost: vec![false; n],
        photon_numbers: None,
        tune_iterations: 0,
        failure: None,
    };
    let mut bath = BathSpec::new(vec![Channel::flat(ChannelOperator::SnailCharge, 0.2, 1.2e-11)]);
    bath.quasideg_threshold = 1e-12;
    let table = build_transition_table(&point, &[x.clone()], None, 0.0, bath.quasideg_threshold).unwrap();
    let rep = assemble(&table, &bath, n).unwrap();
    let l = Liouvillian::new(&rep).unwrap();
    let mut rho0 = Array2::<C64>::zeros((n, n));
    rho0[[n - 1, n - 1]] = C64::new(1.0, 0.0);
    let p0: Vec<f64> = (0..n).map(|i| if i == n - 1 { 1.0 } else { 0.0 }).collect();
    let mut worst = 0.0f64;
    for &t in &[0.5, 3.0, 20.0] {
        let rho = evolve(&rho0, &l, &[t]).unwrap().states.pop().unwrap();
        let want = pauli_populations(&q, &x, &bath, omega_d, &p0, t);
        for mu in 0..n {
            worst = worst.max((rho[[mu, mu]].re - want[mu]).abs());
        }
    }
    worst
}

/// Trace drift and smallest eigenvalue along a coherent-initial-state trajectory.
pub fn toy_physicality() -> (f64, f64) {
    let (sys, p) = driven_three_level();
    let cfg = FloquetConfig { n_steps: 256, n_samples: 32, tune_tol: 1e-10, keep_samples: true, ..Default::default() };
    let point = solve_point(&sys, 0.4, 2.0, &Array2::eye(3), &cfg, true).unwrap();
    let mut bath = BathSpec::new(vec![Channel::flat(ChannelOperator::SnailCharge, 0.01, 2e-11)]);
    bath.quasideg_threshold = 1e-3;
    let d = dissipation_from_operators(&point, &[p], &bath, &TableOptions::default()).unwrap();
    let l = Liouvillian::new(&d.rep).unwrap();
    let mut rho0 = Array2::<C64>::from_elem((3, 3), C64::new(1.0 / 3.0, 0.0));
    rho0[[0, 2]] = C64::new(0.0, 1.0 / 3.0);
    rho0[[2, 0]] = C64::new(0.0, -1.0 / 3.0);
    rho0[[1, 2]] = C64::new(0.0, 1.0 / 3.0);
    rho0[[2, 1]] = C64::new(0.0, -1.0 / 3.0);
    rho0[[0, 1]] = C64::new(1.0 / 3.0, 0.0);
    let times: Vec<f64> = (0..40).map(|k| 10f64.powf(-1.0 + 0.12 * k as f64)).collect();
    let tr = evolve(&rho0, &l, &times).unwrap();
    (tr.max_trace_drift(1.0), tr.min_eigenvalue().unwrap())
}
