//! Per-amplitude dissipative analysis of a solved Floquet point.
//!
//! Builds the master equation, extracts the Liouvillian gap, evolves the two
//! well states and the coherent state `|beta + alpha>`, and fits the
//! tunneling time and `T_Z` from the resulting trajectories.

use ndarray::{s, Array1, Array2};
use serde::{Deserialize, Serialize};

use crate::circuit::SpectralData;
use crate::error::{invalid, Result};
use crate::floquet::FloquetPoint;
use crate::linalg::C64;
use crate::lindblad::{dissipation, evolve, liouvillian_gap, BathSpec, Liouvillian, TableOptions};
use crate::observables::{
    assignment_error_series, coherence_time_tz, log_time_grid, well_states, HusimiProjector, PhaseGrid,
};

/// Which quantities to compute and on which grids.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AnalysisOptions {
    pub table: TableOptions,
    /// Fit the tunneling time from assignment-error trajectories.
    pub dynamics: bool,
    /// Fit `T_Z` from the decay of `<X_L>`.
    pub coherence: bool,
    /// Log-spaced samples per trajectory.
    pub time_points: usize,
    /// First nonzero sample time in units of `1 / gap`.
    pub t_min_gap: f64,
    /// Last sample time in units of `1 / gap`.
    pub t_max_gap: f64,
    /// Husimi grid points per axis; the extent follows the wells.
    pub phase_points: usize,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        AnalysisOptions {
            table: TableOptions { level_cut: Some(40), ..TableOptions::default() },
            dynamics: true,
            coherence: true,
            time_points: 60,
            t_min_gap: 1e-5,
            t_max_gap: 4.0,
            phase_points: 48,
        }
    }
}

impl AnalysisOptions {
    pub fn validate(&self) -> Result<()> {
        if self.time_points < 8 {
            return invalid(format!("outputs.time_points must be >= 8, got {}", self.time_points));
        }
        if !(self.t_min_gap > 0.0 && self.t_max_gap > self.t_min_gap) {
            return invalid("outputs.t_min_gap and t_max_gap must satisfy 0 < t_min_gap < t_max_gap");
        }
        if self.phase_points < 8 {
            return invalid(format!("outputs.phase_points must be >= 8, got {}", self.phase_points));
        }
        if self.table.level_cut.is_some_and(|c| c < 2) {
            return invalid("outputs.table.level_cut must be >= 2");
        }
        Ok(())
    }
}

/// Figures of merit at one amplitude. Rates in 1/s, times in s.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointAnalysis {
    pub gap: f64,
    /// `1 / gap`; infinite when the gap vanishes.
    pub tau_gap: f64,
    pub degenerate_kernel: bool,
    /// Assignment-error decay time.
    pub tau_dyn: Option<f64>,
    pub t_z: Option<f64>,
    /// `<X_L>` showed no separate fast stage.
    pub t_z_single_scale: Option<bool>,
    /// Half the well separation in units of the vacuum width.
    pub alpha_abs: f64,
    pub max_trace_drift: f64,
    pub min_eigenvalue: f64,
}

fn pure(v: &Array1<C64>) -> Array2<C64> {
    let n = v.len();
    Array2::from_shape_fn((n, n), |(i, j)| v[i] * v[j].conj())
}

fn normalized(v: Array1<C64>) -> Array1<C64> {
    let s = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v / C64::new(s, 0.0)
}

fn expectation(rho: &Array2<C64>, v: &Array1<C64>) -> f64 {
    let rv = rho.dot(v);
    v.iter().zip(rv.iter()).map(|(a, b)| (a.conj() * b).re).sum()
}

/// Runs the dissipative pipeline on a point solved with micromotion samples and modes.
pub fn analyze_point(point: &FloquetPoint, sd: &SpectralData, bath: &BathSpec, opts: &AnalysisOptions) -> Result<PointAnalysis> {
    opts.validate()?;
    let diss = dissipation(point, sd, bath, &opts.table)?;
    let l = Liouvillian::new(&diss.rep)?;
    let g = liouvillian_gap(&l);
    let tau_gap = if g.gap > 0.0 { 1.0 / g.gap } else { f64::INFINITY };
    let dim = l.dim;
    let wells = well_states(point, sd, dim)?;
    let mut out = PointAnalysis {
        gap: g.gap,
        tau_gap,
        degenerate_kernel: g.degenerate_kernel,
        tau_dyn: None,
        t_z: None,
        t_z_single_scale: None,
        alpha_abs: wells.alpha.norm(),
        max_trace_drift: 0.0,
        min_eigenvalue: 0.0,
    };
    if !(opts.dynamics || opts.coherence) || !(g.gap > 0.0) {
        return Ok(out);
    }
    let times = log_time_grid(opts.t_min_gap * tau_gap, opts.t_max_gap * tau_gap, opts.time_points);
    let modes = point.modes_t0.slice(s![.., ..dim]).to_owned();
    let mut drift = 0.0f64;
    let mut min_ev = f64::INFINITY;
    let mut track = |t: &crate::lindblad::Trajectory| -> Result<()> {
        drift = drift.max(t.max_trace_drift(1.0));
        min_ev = min_ev.min(t.min_eigenvalue()?);
        Ok(())
    };
    if opts.dynamics {
        let plus = evolve(&pure(&wells.plus), &l, &times)?;
        let minus = evolve(&pure(&wells.minus), &l, &times)?;
        track(&plus)?;
        track(&minus)?;
        let grid = PhaseGrid { n_points: opts.phase_points, ..PhaseGrid::for_wells(wells.alpha, wells.beta) };
        let proj = HusimiProjector::new(sd, &modes, grid)?;
        let ae = assignment_error_series(&proj, &plus, &minus)?;
        out.tau_dyn = Some(ae.tau);
    }
    if opts.coherence {
        let cp = HusimiProjector::coherent_in_modes(sd, &modes, wells.beta + wells.alpha)?;
        let cm = HusimiProjector::coherent_in_modes(sd, &modes, wells.beta - wells.alpha)?;
        let traj = evolve(&pure(&normalized(cp.clone())), &l, &times)?;
        track(&traj)?;
        let xl: Vec<f64> = traj.states.iter().map(|r| expectation(r, &cp) - expectation(r, &cm)).collect();
        let tz = coherence_time_tz(&times, &xl, g.gap)?;
        out.t_z = Some(tz.t_z);
        out.t_z_single_scale = Some(tz.single_scale);
    }
    out.max_trace_drift = drift;
    out.min_eigenvalue = min_ev;
    Ok(out)
}
