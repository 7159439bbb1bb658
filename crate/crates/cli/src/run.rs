//! Sweep orchestration: sequential tracking, parallel post-processing,
//! per-row failure isolation and checkpointing.
//!
//! A checkpoint at `P` consists of the tracking checkpoint `P` (with its
//! modes sidecar), finished rows in `P.rows.jsonl`, and `P.meta.json` with
//! the configuration fingerprint. Rows are flushed before the tracking
//! record of the same amplitude, so on resume surplus rows are dropped and
//! every remaining row has its tracking state.

use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use kerrcat::analysis::analyze_point;
use kerrcat::circuit::{build, SpectralData};
use kerrcat::floquet::{
    detect_events, extrapolate_frequency, solve_point, CheckpointRecord, Checkpointer, EventConfig, FloquetPoint,
    FloquetSystem, ResumeState,
};
use kerrcat::units::{from_hz, to_hz};
use ndarray::{Array1, Array2};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{ConfigError, RunConfig};
use crate::result::{CrossingRecord, KissRecord, Provenance, Row, RowStatus, SweepResult};

#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    /// Name recorded in the provenance block.
    pub preset: Option<String>,
    /// Stop after this many newly computed amplitudes (simulates an interruption).
    pub max_new_points: Option<usize>,
}

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("checkpoint: {0}")]
    Checkpoint(String),
    #[error(transparent)]
    Core(#[from] kerrcat::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("worker pool: {0}")]
    Pool(String),
}

#[derive(Debug, Serialize, Deserialize)]
struct Meta {
    config_hash: String,
    points: usize,
}

fn with_suffix(p: &Path, suffix: &str) -> PathBuf {
    let mut s = p.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

/// Point recorded for an amplitude whose solve failed: keeps the previous
/// modes so tracking resumes from the last good state.
fn placeholder(eps_d: f64, prev: &Array2<kerrcat::C64>, msg: &str) -> FloquetPoint {
    let n = prev.ncols();
    FloquetPoint {
        eps_d,
        omega_d: 0.0,
        quasienergies: Array1::zeros(n),
        modes_t0: prev.clone(),
        mode_samples: vec![],
        labels: (0..n).collect(),
        tracking_fidelity: Array1::zeros(n),
        partner: (0..n).map(|mu| (mu, 0.0)).collect(),
        lost: vec![true; n],
        photon_numbers: None,
        tune_iterations: 0,
        failure: Some(format!("error: {msg}")),
    }
}

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

fn failed_row(index: usize, eps_hz: f64, msg: String) -> Row {
    Row {
        index,
        eps_d_hz: eps_hz,
        status: RowStatus::Failed,
        error: Some(msg),
        omega_d_hz: None,
        tune_converged: None,
        quasienergies_hz: vec![],
        photon_0: None,
        photon_1: None,
        min_fidelity: None,
        gap: None,
        tau_gap: None,
        tau_dyn: None,
        t_z: None,
        alpha_abs: None,
    }
}

fn make_row(cfg: &RunConfig, sd: &SpectralData, index: usize, eps_hz: f64, p: &FloquetPoint) -> Row {
    let o = &cfg.outputs;
    let nb = o.branches.min(p.tracking_fidelity.len());
    let mut row = Row {
        index,
        eps_d_hz: eps_hz,
        status: RowStatus::TrackedOnly,
        error: p.failure.clone(),
        omega_d_hz: Some(to_hz(p.omega_d)),
        tune_converged: Some(p.failure.is_none()),
        quasienergies_hz: p.quasienergies.iter().take(o.quasienergies).map(|&q| to_hz(q)).collect(),
        photon_0: p.photon_numbers.map(|n| n[0]),
        photon_1: p.photon_numbers.map(|n| n[1]),
        min_fidelity: Some(p.tracking_fidelity.iter().take(nb).copied().fold(1.0, f64::min)),
        gap: None,
        tau_gap: None,
        tau_dyn: None,
        t_z: None,
        alpha_abs: None,
    };
    if eps_hz < cfg.sweep.eps_min {
        return row;
    }
    match analyze_point(p, sd, &cfg.bath_spec(), &cfg.analysis_options()) {
        Ok(a) => {
            row.status = RowStatus::Ok;
            row.gap = Some(a.gap);
            row.tau_gap = finite(a.tau_gap);
            row.tau_dyn = a.tau_dyn.and_then(finite);
            row.t_z = a.t_z.and_then(finite);
            row.alpha_abs = Some(a.alpha_abs);
        }
        Err(e) => {
            log::warn!("eps_d = {eps_hz:.6e} Hz: analysis failed: {e}");
            row.status = RowStatus::Failed;
            row.error = Some(format!("analysis: {e}"));
        }
    }
    row
}

struct Store {
    tracking: Checkpointer,
    rows: File,
}

/// Opens or resumes the checkpoint; returns the recovered rows and tracking state.
fn open_store(path: &Path, hash: &str, points: usize, resume: bool) -> Result<(Store, Vec<Row>, Option<ResumeState>), RunError> {
    let rows_path = with_suffix(path, ".rows.jsonl");
    let meta_path = with_suffix(path, ".meta.json");
    if resume && meta_path.exists() {
        let meta: Meta = serde_json::from_str(&std::fs::read_to_string(&meta_path)?)
            .map_err(|e| RunError::Checkpoint(format!("unreadable {}: {e}", meta_path.display())))?;
        if meta.config_hash != hash || meta.points != points {
            return Err(RunError::Checkpoint(format!(
                "{} was written for a different configuration",
                meta_path.display()
            )));
        }
        let state = ResumeState::load(path)?;
        let n_done = state.as_ref().map_or(0, |s| s.records.len());
        let mut rows = vec![];
        if rows_path.exists() {
            for line in BufReader::new(File::open(&rows_path)?).lines() {
                let line = line?;
                match serde_json::from_str::<Row>(&line) {
                    Ok(r) if rows.len() < n_done && r.index == rows.len() => rows.push(r),
                    Ok(_) => break,
                    Err(e) => {
                        log::warn!("ignoring unreadable row line: {e}");
                        break;
                    }
                }
            }
        }
        if rows.len() < n_done {
            return Err(RunError::Checkpoint(format!(
                "{} holds {} rows for {n_done} tracked amplitudes",
                rows_path.display(),
                rows.len()
            )));
        }
        let mut f = File::create(&rows_path)?;
        for r in &rows {
            writeln!(f, "{}", serde_json::to_string(r).expect("row serializes"))?;
        }
        f.sync_all()?;
        // Drop tracking lines written after the last saved modes.
        let tracking = match &state {
            Some(st) => {
                let mut f = File::create(path)?;
                for r in &st.records {
                    writeln!(f, "{}", serde_json::to_string(r).expect("record serializes"))?;
                }
                f.sync_all()?;
                Checkpointer::open(path)?
            }
            None => Checkpointer::create(path)?,
        };
        let rows_file = OpenOptions::new().append(true).open(&rows_path)?;
        log::info!("resuming after {n_done} amplitudes");
        return Ok((Store { tracking, rows: rows_file }, rows, state));
    }
    let tracking = Checkpointer::create(path)?;
    let rows_file = File::create(&rows_path)?;
    let meta = Meta { config_hash: hash.to_string(), points };
    std::fs::write(&meta_path, serde_json::to_string_pretty(&meta).expect("meta serializes"))?;
    Ok((Store { tracking, rows: rows_file }, vec![], None))
}

fn provenance(cfg: &RunConfig, opts: &RunOptions) -> Provenance {
    Provenance {
        config_hash: cfg.fingerprint(),
        code_version: env!("CARGO_PKG_VERSION").to_string(),
        preset: opts.preset.clone(),
        scenario: cfg.circuit.scenario.to_string(),
        n_keep: cfg.hilbert.n_keep,
        n_steps: cfg.floquet.n_steps,
        n_samples: cfg.floquet.n_samples,
        level_cut: cfg.outputs.level_cut,
        k_max: cfg.outputs.k_max,
        time_points: cfg.outputs.time_grid.points,
        phase_points: cfg.outputs.phase_grid.points,
        delta_eps_hz: cfg.sweep.delta_eps,
        created_unix: SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0),
    }
}

/// Runs the sweep described by `cfg`. Per-amplitude failures become failed
/// rows; only configuration, build and checkpoint problems abort the run.
pub fn run(cfg: &RunConfig, opts: &RunOptions) -> Result<SweepResult, RunError> {
    cfg.validate()?;
    let sd = build(&cfg.circuit_spec(), &cfg.hilbert)?;
    for w in &sd.warnings {
        log::warn!("{w}");
    }
    let sys = FloquetSystem::from_spectral(&sd)?;
    let n = sys.dim();
    let grid_hz = cfg.amplitude_grid_hz();
    let fcfg = cfg.floquet_config();
    let hash = cfg.fingerprint();

    let (mut store, mut rows, state) = match &cfg.compute.checkpoint {
        Some(p) => {
            let (s, r, st) = open_store(p, &hash, grid_hz.len(), cfg.compute.resume)?;
            (Some(s), r, st)
        }
        None => (None, vec![], None),
    };
    // Tracked points without modes, `None` where tracking failed.
    let mut light: Vec<Option<FloquetPoint>> = vec![];
    let mut prev: Array2<kerrcat::C64> = Array2::eye(n);
    if let Some(st) = state {
        for (r, row) in st.records.iter().zip(&rows) {
            if r.index >= grid_hz.len() || r.eps_d.to_bits() != from_hz(grid_hz[r.index]).to_bits() {
                return Err(RunError::Checkpoint(format!("record {} does not match the amplitude grid", r.index)));
            }
            light.push(row.omega_d_hz.is_some().then(|| CheckpointRecord::to_point(r)));
        }
        if st.last_modes.dim() != (n, n) {
            return Err(RunError::Checkpoint(format!("saved modes are {:?}, expected {n}^2", st.last_modes.dim())));
        }
        prev = st.last_modes;
    }

    let workers = if cfg.compute.workers == 0 { rayon::current_num_threads() } else { cfg.compute.workers };
    let pool = rayon::ThreadPoolBuilder::new().num_threads(workers).build().map_err(|e| RunError::Pool(e.to_string()))?;
    let omega0 = 2.0 * (sys.energies[1] - sys.energies[0]);
    let todo: Vec<usize> = (rows.len()..grid_hz.len()).take(opts.max_new_points.unwrap_or(usize::MAX)).collect();
    for chunk in todo.chunks(workers.max(1)) {
        let chunk_prev = prev.clone();
        let mut tracked: Vec<(usize, Result<FloquetPoint, String>)> = vec![];
        for &idx in chunk {
            let eps = from_hz(grid_hz[idx]);
            let mut good: Vec<FloquetPoint> = light.iter().rev().flatten().take(2).cloned().collect();
            good.reverse();
            let guess = extrapolate_frequency(&good, eps).unwrap_or(omega0);
            let res = solve_point(&sys, eps, guess, &prev, &fcfg, true).map_err(|e| e.to_string());
            match &res {
                Ok(p) => {
                    prev = p.modes_t0.clone();
                    log::info!("eps_d = {:.6e} Hz: omega_d/2pi = {:.9e} Hz", grid_hz[idx], to_hz(p.omega_d));
                }
                Err(e) => log::warn!("eps_d = {:.6e} Hz: {e}", grid_hz[idx]),
            }
            light.push(res.as_ref().ok().map(|p| FloquetPoint { modes_t0: Array2::zeros((0, 0)), mode_samples: vec![], ..p.clone() }));
            tracked.push((idx, res));
        }
        let new_rows: Vec<Row> = pool.install(|| {
            tracked
                .par_iter()
                .map(|(idx, res)| match res {
                    Ok(p) => make_row(cfg, &sd, *idx, grid_hz[*idx], p),
                    Err(e) => failed_row(*idx, grid_hz[*idx], e.clone()),
                })
                .collect()
        });
        if let Some(s) = store.as_mut() {
            for r in &new_rows {
                writeln!(s.rows, "{}", serde_json::to_string(r).expect("row serializes"))?;
            }
            s.rows.flush()?;
            let mut last_good = chunk_prev;
            for (idx, res) in &tracked {
                match res {
                    Ok(p) => {
                        s.tracking.append(*idx, p)?;
                        last_good = p.modes_t0.clone();
                    }
                    Err(e) => s.tracking.append(*idx, &placeholder(from_hz(grid_hz[*idx]), &last_good, e))?,
                }
            }
        }
        rows.extend(new_rows);
    }

    let ok: Vec<(usize, FloquetPoint)> = light.into_iter().enumerate().filter_map(|(i, p)| p.map(|p| (i, p))).collect();
    let pts: Vec<FloquetPoint> = ok.iter().map(|(_, p)| p.clone()).collect();
    let ecfg = EventConfig { kiss_tol: from_hz(cfg.outputs.kiss_tol), n_branches: Some(cfg.outputs.branches), ..EventConfig::default() };
    let (kisses, crossings) = detect_events(&pts, &sys.energies, &ecfg);
    let row_of = |k: usize| ok[k].0;
    let kiss_events = kisses
        .iter()
        .map(|k| KissRecord { pair: k.pair, eps_d_hz: grid_hz[row_of(k.index)], index: row_of(k.index) })
        .collect();
    let crossing_events = crossings
        .iter()
        .map(|c| CrossingRecord {
            branch: c.branch,
            partner: c.partner,
            eps_d_hz: grid_hz[row_of(c.index)],
            index: row_of(c.index),
            min_fidelity: c.min_fidelity,
        })
        .collect();
    Ok(SweepResult {
        provenance: provenance(cfg, opts),
        n_quasienergies: cfg.outputs.quasienergies,
        rows,
        kiss_events,
        crossing_events,
    })
}
