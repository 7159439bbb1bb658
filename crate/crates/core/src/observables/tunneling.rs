//! Tunneling time from assignment errors, coherence time `T_Z`, and leakage.

use ndarray::{Array1, Array2};

use super::phase_space::{HusimiProjector, PhaseGrid};
use super::wells::WellStates;
use crate::error::{invalid, Result};
use crate::fit::{fit_exponential, ExpFit};
use crate::linalg::C64;
use crate::lindblad::Trajectory;

/// `0` followed by `n` log-spaced times from `t_lo` to `t_hi`.
pub fn log_time_grid(t_lo: f64, t_hi: f64, n: usize) -> Vec<f64> {
    assert!(t_lo > 0.0 && t_hi > t_lo && n >= 2, "invalid time grid");
    let (a, b) = (t_lo.ln(), t_hi.ln());
    std::iter::once(0.0).chain((0..n).map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())).collect()
}

/// Ideal likelihood discrimination of two Husimi fields:
/// `(X_+, X_-) = (1 - 2 P(-|+), 1 - 2 P(+|-))`.
pub(crate) fn assignment_from_fields(q_plus: &Array2<f64>, q_minus: &Array2<f64>) -> (f64, f64) {
    let (mut tot_p, mut tot_m, mut wrong_p, mut wrong_m) = (0.0, 0.0, 0.0, 0.0);
    for (&p, &m) in q_plus.iter().zip(q_minus.iter()) {
        let theta = if p > m {
            1.0
        } else if p < m {
            0.0
        } else {
            0.5
        };
        tot_p += p;
        tot_m += m;
        wrong_p += (1.0 - theta) * p;
        wrong_m += theta * m;
    }
    (1.0 - 2.0 * wrong_p / tot_p, 1.0 - 2.0 * wrong_m / tot_m)
}

/// Assignment-error decays and the fitted tunneling time.
#[derive(Clone, Debug)]
pub struct AssignmentErrorResult {
    pub times: Vec<f64>,
    pub x_plus: Vec<f64>,
    pub x_minus: Vec<f64>,
    pub fit_plus: ExpFit,
    pub fit_minus: ExpFit,
    /// Average of the two decay times; `inf` when neither decays.
    pub tau: f64,
    /// A fit needed a trimmed window to reach `R^2 >= 0.95`.
    pub refit: bool,
    /// Smallest Husimi weight captured by the grid along either trajectory.
    pub min_coverage: f64,
}

fn robust_fit(t: &[f64], y: &[f64]) -> (ExpFit, bool) {
    let f = fit_exponential(t, y);
    if f.r2 >= 0.95 || t.len() < 8 {
        return (f, false);
    }
    let skip = t.len() / 4;
    let g = fit_exponential(&t[skip..], &y[skip..]);
    (if g.r2 > f.r2 { g } else { f }, true)
}

/// `X_+(t)`, `X_-(t)` from trajectories started in the two wells, each
/// fitted with `A exp(-t / tau) + C`.
pub fn assignment_error_series(
    proj: &HusimiProjector,
    plus: &Trajectory,
    minus: &Trajectory,
) -> Result<AssignmentErrorResult> {
    if plus.times != minus.times {
        return invalid("trajectories must share their time grid");
    }
    let mut x_plus = vec![];
    let mut x_minus = vec![];
    let mut min_coverage = f64::INFINITY;
    for (rp, rm) in plus.states.iter().zip(&minus.states) {
        let qp = proj.husimi(rp);
        let qm = proj.husimi(rm);
        min_coverage = min_coverage.min(proj.grid.integrate(&qp)).min(proj.grid.integrate(&qm));
        let (a, b) = assignment_from_fields(&qp, &qm);
        x_plus.push(a);
        x_minus.push(b);
    }
    if min_coverage < 0.99 {
        log::warn!("phase grid captures only {min_coverage:.4} of the Husimi weight");
    }
    let (fit_plus, r1) = robust_fit(&plus.times, &x_plus);
    let (fit_minus, r2) = robust_fit(&plus.times, &x_minus);
    let tau = 0.5 * (fit_plus.tau + fit_minus.tau);
    Ok(AssignmentErrorResult {
        times: plus.times.clone(),
        x_plus,
        x_minus,
        fit_plus,
        fit_minus,
        tau,
        refit: r1 || r2,
        min_coverage,
    })
}

/// Initial-decay fit of `<X_L>(t)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TzResult {
    pub t_z: f64,
    /// End of the fitted window.
    pub window_end: f64,
    pub fit: ExpFit,
    /// No scale separation: `T_Z` reported as the slow time.
    pub single_scale: bool,
}

/// `T_Z` from the decay of `<X_L>` before the slow tail.
///
/// The window ends at the first time the log-derivative of `<X_L>` falls to
/// within 20% of `slow_rate`; without such a point it ends at the first 10%
/// amplitude drop.
pub fn coherence_time_tz(times: &[f64], xl: &[f64], slow_rate: f64) -> Result<TzResult> {
    if times.len() != xl.len() || times.len() < 4 {
        return invalid("T_Z needs at least four matching samples");
    }
    if !(slow_rate > 0.0) {
        let fit = fit_exponential(times, xl);
        return Ok(TzResult { t_z: fit.tau, window_end: *times.last().unwrap(), fit, single_scale: true });
    }
    let mut end = None;
    for i in 0..times.len() - 1 {
        let (a, b) = (xl[i], xl[i + 1]);
        if a <= 0.0 || b <= 0.0 {
            break;
        }
        let r = -(b.ln() - a.ln()) / (times[i + 1] - times[i]);
        if r <= 1.2 * slow_rate {
            end = Some(i);
            break;
        }
    }
    let end = match end {
        Some(0) => {
            let fit = fit_exponential(times, xl);
            return Ok(TzResult { t_z: 1.0 / slow_rate, window_end: times[0], fit, single_scale: true });
        }
        Some(i) => i,
        None => xl.iter().position(|&x| x < 0.9 * xl[0]).unwrap_or(times.len() - 1),
    };
    let end = end.max(3).min(times.len() - 1);
    let fit = fit_exponential(&times[..=end], &xl[..=end]);
    Ok(TzResult { t_z: fit.tau, window_end: times[end], fit, single_scale: false })
}

/// Population of one well and its leakage out of the ideal coherent state.
#[derive(Clone, Debug)]
pub struct LeakageSeries {
    pub times: Vec<f64>,
    /// Husimi weight on the well's side of the bisector.
    pub p_well: Vec<f64>,
    /// `<beta +- alpha| rho |beta +- alpha>`.
    pub p_coherent: Vec<f64>,
    pub p_leak: Vec<f64>,
    /// Well centers closer than two vacuum widths.
    pub undefined: bool,
}

/// Husimi weight on the side of the perpendicular bisector containing `beta + sign alpha`.
pub(crate) fn half_plane_weight(grid: &PhaseGrid, q: &Array2<f64>, beta: C64, alpha: C64, plus: bool) -> f64 {
    let s = if plus { 1.0 } else { -1.0 };
    let pts = grid.points();
    let mut acc = 0.0;
    for (p, &v) in pts.iter().zip(q.iter()) {
        let side = ((p - beta) * alpha.conj()).re * s;
        if side > 0.0 {
            acc += v;
        } else if side == 0.0 {
            acc += 0.5 * v;
        }
    }
    acc * grid.cell()
}

/// `p_leak(t) = p_well(t) - <beta +- alpha| rho(t) |beta +- alpha>`.
///
/// `coherent` holds `<phi_mu | beta +- alpha>` in the trajectory's basis.
pub fn leakage_probability(
    proj: &HusimiProjector,
    traj: &Trajectory,
    wells: &WellStates,
    plus: bool,
    coherent: &Array1<C64>,
) -> LeakageSeries {
    let mut p_well = vec![];
    let mut p_coherent = vec![];
    for rho in &traj.states {
        let q = proj.husimi(rho);
        p_well.push(half_plane_weight(&proj.grid, &q, wells.beta, wells.alpha, plus));
        let rv = rho.dot(coherent);
        p_coherent.push(coherent.iter().zip(rv.iter()).map(|(a, b)| (a.conj() * b).re).sum());
    }
    let p_leak = p_well.iter().zip(&p_coherent).map(|(a, b)| a - b).collect();
    LeakageSeries { times: traj.times.clone(), p_well, p_coherent, p_leak, undefined: wells.alpha.norm() < 1.0 }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::observables::{coherent_state, husimi_fock};

    fn pure(v: &Array1<C64>) -> Array2<C64> {
        let n = v.len();
        Array2::from_shape_fn((n, n), |(i, j)| v[i] * v[j].conj())
    }

    /// `D(g)|1>` in the Fock basis: `(a^dag - g*) |g>`.
    fn displaced_one(g: C64, n: usize) -> Array1<C64> {
        let c = coherent_state(g, n + 1);
        Array1::from_iter((0..n).map(|m| {
            let up = if m > 0 { c[m - 1] * (m as f64).sqrt() } else { C64::new(0.0, 0.0) };
            up - g.conj() * c[m]
        }))
    }

    #[test]
    fn separated_wells_are_distinguishable() {
        let g = C64::new(3.0, 0.5);
        let grid = PhaseGrid::square(7.0, 141);
        let qp = husimi_fock(&pure(&coherent_state(g, 60)), &grid).unwrap();
        let qm = husimi_fock(&pure(&coherent_state(-g, 60)), &grid).unwrap();
        let (a, b) = assignment_from_fields(&qp, &qm);
        assert!(1.0 - a < 0.02 && 1.0 - b < 0.02, "{a} {b}");
    }

    #[test]
    fn symmetric_mixture_has_no_information() {
        let g = C64::new(2.0, 0.0);
        let grid = PhaseGrid::square(6.0, 121);
        let mix = (pure(&coherent_state(g, 50)) + pure(&coherent_state(-g, 50))) / C64::new(2.0, 0.0);
        let q = husimi_fock(&mix, &grid).unwrap();
        let (a, b) = assignment_from_fields(&q, &q);
        assert!(a.abs() < 1e-12 && b.abs() < 1e-12);
    }

    #[test]
    fn leakage_of_ideal_and_excited_wells() {
        let g = C64::new(2.5, 0.0);
        let grid = PhaseGrid::square(7.0, 141);
        let coh = coherent_state(g, 60);
        let q = husimi_fock(&pure(&coh), &grid).unwrap();
        let p = half_plane_weight(&grid, &q, C64::new(0.0, 0.0), g, true);
        assert!((p - 1.0).abs() < 1e-3, "ideal well weight {p}");
        // D(g)|1> has zero overlap with |g> and stays in the well.
        let ex = displaced_one(g, 60);
        let norm: f64 = ex.iter().map(|z| z.norm_sqr()).sum();
        assert!((norm - 1.0).abs() < 1e-10);
        let overlap = coh.iter().zip(ex.iter()).map(|(a, b)| a.conj() * b).sum::<C64>().norm_sqr();
        assert!(overlap < 1e-20);
        let q1 = husimi_fock(&pure(&ex), &grid).unwrap();
        let p1 = half_plane_weight(&grid, &q1, C64::new(0.0, 0.0), g, true);
        assert!(p1 - overlap > 0.99);
    }

    #[test]
    fn tz_window_separates_scales() {
        let times = log_time_grid(1e-3, 1e3, 120);
        let (fast, slow) = (0.5, 200.0);
        let xl: Vec<f64> = times.iter().map(|&t| 0.6 * (-t / fast).exp() + 0.4 * (-t / slow).exp()).collect();
        let r = coherence_time_tz(&times, &xl, 1.0 / slow).unwrap();
        assert!(!r.single_scale);
        assert!((r.t_z / fast - 1.0).abs() < 0.1, "T_Z {}", r.t_z);
    }

    #[test]
    fn tz_without_separation_reports_slow_time() {
        let times = log_time_grid(1e-2, 1e2, 60);
        let xl: Vec<f64> = times.iter().map(|&t| (-t / 10.0).exp()).collect();
        let r = coherence_time_tz(&times, &xl, 0.1).unwrap();
        assert!(r.single_scale);
        assert!((r.t_z - 10.0).abs() < 1e-9);
    }
}
