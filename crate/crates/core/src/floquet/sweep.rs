//! Per-point solve, self-consistent frequency tuning, and amplitude sweeps.

use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, Read, Write};
use std::path::{Path, PathBuf};

use ndarray::{Array1, Array2, Axis};
use serde::{Deserialize, Serialize};

use super::assign::hungarian_max;
use super::decompose::{align_degenerate_clusters, floquet_decompose};
use super::events::{detect_events, EventConfig};
use super::{DriveSpec, FloquetBranchSet, FloquetConfig, FloquetPoint, FloquetSystem};
use crate::error::{invalid, Error, Result};
use crate::linalg::{dagger, max_abs, C64};

/// Result of the fixed-point iteration `omega_d <- 2 (eps_1 - eps_0)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TuneOutcome {
    pub omega_d: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Size of the last frequency update (rad/s).
    pub last_step: f64,
}

struct Decomposed {
    omega_d: f64,
    quasienergies: Array1<f64>,
    modes: Array2<C64>,
    labels: Vec<usize>,
    overlap: Array2<f64>,
    unitaries: Vec<Array2<C64>>,
    times: Vec<f64>,
}

fn decompose_at(
    sys: &FloquetSystem,
    eps_d: f64,
    omega_d: f64,
    prev: &Array2<C64>,
    cfg: &FloquetConfig,
) -> Result<Decomposed> {
    let drive = DriveSpec::new(eps_d, omega_d);
    drive.validate()?;
    let n = sys.dim();
    let wf = drive.waveform();
    let stride = cfg.n_steps / cfg.n_samples;
    let prop = sys.propagate(&wf, drive.period(), cfg.n_steps, &Array2::eye(n), stride)?;
    let u = prop.final_state;
    let res = max_abs(&(dagger(&u).dot(&u) - Array2::<C64>::eye(n)));
    if res > cfg.unitarity_tol {
        return Err(Error::Unitarity(res));
    }
    let (q, mut v) = floquet_decompose(&u, omega_d)?;
    let touched = align_degenerate_clusters(&q, &mut v, prev, omega_d, cfg.degeneracy_tol)?;
    if touched > 0 {
        log::debug!("eps_d={eps_d:.6e}: realigned {touched} degenerate quasienergy clusters");
    }
    let overlap = dagger(prev).dot(&v).mapv(|z| z.norm_sqr());
    let labels = hungarian_max(&overlap);
    Ok(Decomposed {
        omega_d,
        quasienergies: q,
        modes: v,
        labels,
        overlap,
        unitaries: prop.samples,
        times: prop.sample_times,
    })
}

fn tuned_frequency(d: &Decomposed) -> f64 {
    let q = &d.quasienergies;
    2.0 * (q[d.labels[1]] - q[d.labels[0]]).rem_euclid(d.omega_d)
}

fn iterate(
    sys: &FloquetSystem,
    eps_d: f64,
    omega_guess: f64,
    prev: &Array2<C64>,
    cfg: &FloquetConfig,
    tune: bool,
) -> Result<(Decomposed, TuneOutcome)> {
    if sys.dim() < 2 {
        return invalid("a Floquet solve needs at least two levels");
    }
    let mut omega = omega_guess;
    let mut prev_step = 0.0f64;
    let mut iterations = 0;
    loop {
        iterations += 1;
        let d = decompose_at(sys, eps_d, omega, prev, cfg)?;
        if !tune {
            return Ok((d, TuneOutcome { omega_d: omega, iterations, converged: true, last_step: 0.0 }));
        }
        let target = tuned_frequency(&d);
        let step = target - omega;
        let last_step = step.abs();
        if last_step < cfg.tune_tol {
            return Ok((d, TuneOutcome { omega_d: omega, iterations, converged: true, last_step }));
        }
        if iterations >= cfg.tune_max_iter {
            return Ok((d, TuneOutcome { omega_d: omega, iterations, converged: false, last_step }));
        }
        let damped = if step * prev_step < 0.0 { cfg.tune_damping * step } else { step };
        prev_step = step;
        omega += damped;
        if !(omega > 0.0) {
            return Err(Error::Tuning { iterations, last: omega });
        }
    }
}

fn assemble(sys: &FloquetSystem, eps_d: f64, d: Decomposed, t: TuneOutcome, cfg: &FloquetConfig) -> FloquetPoint {
    let n = sys.dim();
    let labeled = d.modes.select(Axis(1), &d.labels);
    let quasienergies = Array1::from_iter(d.labels.iter().map(|&c| d.quasienergies[c]));
    let tracking_fidelity = Array1::from_iter((0..n).map(|mu| d.overlap[[mu, d.labels[mu]]].clamp(0.0, 1.0)));
    let mut branch_of_col = vec![0usize; n];
    for (mu, &c) in d.labels.iter().enumerate() {
        branch_of_col[c] = mu;
    }
    let partner = (0..n)
        .map(|mu| {
            let mut best = (mu, 0.0);
            for c in 0..n {
                if c != d.labels[mu] && d.overlap[[mu, c]] > best.1 {
                    best = (branch_of_col[c], d.overlap[[mu, c]]);
                }
            }
            best
        })
        .collect();
    let lost = tracking_fidelity.iter().map(|&f| f < cfg.fidelity_floor).collect();
    let mode_samples: Vec<Array2<C64>> = d
        .unitaries
        .iter()
        .zip(&d.times)
        .map(|(u, &tj)| {
            let phases = quasienergies.mapv(|e| C64::from_polar(1.0, e * tj));
            u.dot(&labeled) * &phases.view().insert_axis(Axis(0))
        })
        .collect();
    let photon_numbers = sys.photon.as_ref().map(|nop| {
        let mut acc = [0.0; 2];
        let snaps: Vec<&Array2<C64>> = if mode_samples.is_empty() { vec![&labeled] } else { mode_samples.iter().collect() };
        for m in &snaps {
            for (k, slot) in acc.iter_mut().enumerate() {
                let col = m.column(k);
                let nv = nop.dot(&col);
                *slot += col.iter().zip(nv.iter()).map(|(a, b)| (a.conj() * b).re).sum::<f64>();
            }
        }
        acc.map(|x| x / snaps.len() as f64)
    });
    let failure = if t.converged {
        None
    } else {
        Some(format!(
            "frequency tuning did not converge after {} iterations (last step {:.3e} rad/s)",
            t.iterations, t.last_step
        ))
    };
    FloquetPoint {
        eps_d,
        omega_d: t.omega_d,
        quasienergies,
        modes_t0: labeled,
        mode_samples,
        labels: d.labels,
        tracking_fidelity,
        partner,
        lost,
        photon_numbers,
        tune_iterations: t.iterations,
        failure,
    }
}

/// Solves one sweep point, labeling branches against `prev_modes`
/// (columns indexed by branch). With `tune`, the drive frequency is iterated
/// to `2 (eps_1 - eps_0)`; a tuning failure is reported in `failure`.
pub fn solve_point(
    sys: &FloquetSystem,
    eps_d: f64,
    omega_guess: f64,
    prev_modes: &Array2<C64>,
    cfg: &FloquetConfig,
    tune: bool,
) -> Result<FloquetPoint> {
    cfg.validate()?;
    if prev_modes.dim() != (sys.dim(), sys.dim()) {
        return Err(Error::Dimension(format!("previous modes are {:?}, expected {}^2", prev_modes.dim(), sys.dim())));
    }
    let (d, t) = iterate(sys, eps_d, omega_guess, prev_modes, cfg, tune)?;
    Ok(assemble(sys, eps_d, d, t, cfg))
}

/// Self-consistent drive frequency at `eps_d`; errors with the last iterate
/// when the iteration does not converge.
pub fn tune_drive_frequency(
    sys: &FloquetSystem,
    eps_d: f64,
    omega_guess: f64,
    prev_modes: &Array2<C64>,
    cfg: &FloquetConfig,
) -> Result<TuneOutcome> {
    cfg.validate()?;
    let (_, t) = iterate(sys, eps_d, omega_guess, prev_modes, cfg, true)?;
    if !t.converged {
        return Err(Error::Tuning { iterations: t.iterations, last: t.omega_d });
    }
    Ok(t)
}

/// Floquet modes `e^{i eps t_j} U(t_j, 0) |phi(0)>` at `t_j = j T / n_t`.
pub fn micromotion_samples(
    sys: &FloquetSystem,
    drive: &DriveSpec,
    modes_t0: &Array2<C64>,
    quasienergies: &Array1<f64>,
    n_t: usize,
    n_steps: usize,
) -> Result<Vec<Array2<C64>>> {
    drive.validate()?;
    if n_t == 0 || !n_t.is_power_of_two() {
        return invalid(format!("sample count must be a power of two, got {n_t}"));
    }
    let steps = n_steps.max(n_t).div_ceil(n_t) * n_t;
    let wf = drive.waveform();
    let t_end = drive.period();
    let prop = sys.propagate(&wf, t_end, steps, modes_t0, steps / n_t)?;
    let phase = |t: f64| quasienergies.mapv(|e| C64::from_polar(1.0, e * t)).insert_axis(Axis(0));
    let end = &prop.final_state * &phase(t_end);
    let res = max_abs(&(end - modes_t0));
    if res > 1e-7 {
        return Err(Error::Periodicity(res));
    }
    Ok(prop.samples.iter().zip(&prop.sample_times).map(|(s, &t)| s * &phase(t)).collect())
}

/// Serializable summary of one sweep point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckpointRecord {
    pub index: usize,
    pub eps_d: f64,
    pub omega_d: f64,
    pub quasienergies: Vec<f64>,
    pub labels: Vec<usize>,
    pub tracking_fidelity: Vec<f64>,
    pub partner: Vec<(usize, f64)>,
    pub lost: Vec<bool>,
    pub photon_numbers: Option<[f64; 2]>,
    pub tune_iterations: usize,
    pub failure: Option<String>,
}

impl CheckpointRecord {
    pub fn from_point(index: usize, p: &FloquetPoint) -> Self {
        CheckpointRecord {
            index,
            eps_d: p.eps_d,
            omega_d: p.omega_d,
            quasienergies: p.quasienergies.to_vec(),
            labels: p.labels.clone(),
            tracking_fidelity: p.tracking_fidelity.to_vec(),
            partner: p.partner.clone(),
            lost: p.lost.clone(),
            photon_numbers: p.photon_numbers,
            tune_iterations: p.tune_iterations,
            failure: p.failure.clone(),
        }
    }

    /// Point without mode data.
    pub fn to_point(&self) -> FloquetPoint {
        FloquetPoint {
            eps_d: self.eps_d,
            omega_d: self.omega_d,
            quasienergies: Array1::from(self.quasienergies.clone()),
            modes_t0: Array2::zeros((0, 0)),
            mode_samples: vec![],
            labels: self.labels.clone(),
            tracking_fidelity: Array1::from(self.tracking_fidelity.clone()),
            partner: self.partner.clone(),
            lost: self.lost.clone(),
            photon_numbers: self.photon_numbers,
            tune_iterations: self.tune_iterations,
            failure: self.failure.clone(),
        }
    }
}

fn sidecar(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".modes");
    PathBuf::from(s)
}

/// Append-only JSON-lines checkpoint with a sidecar holding the latest modes.
#[derive(Debug)]
pub struct Checkpointer {
    path: PathBuf,
    file: File,
}

impl Checkpointer {
    /// Opens `path` for appending, creating it if needed.
    pub fn open(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref().to_path_buf();
        let file = OpenOptions::new().create(true).append(true).open(&path)?;
        Ok(Checkpointer { path, file })
    }

    /// Truncates `path` and opens it for appending.
    pub fn create(path: impl AsRef<Path>) -> Result<Self> {
        File::create(path.as_ref())?;
        let _ = fs::remove_file(sidecar(path.as_ref()));
        Self::open(path)
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    /// Records point `index`, then atomically replaces the modes sidecar.
    pub fn append(&mut self, index: usize, point: &FloquetPoint) -> Result<()> {
        let mut line = serde_json::to_string(&CheckpointRecord::from_point(index, point))?;
        line.push('\n');
        self.file.write_all(line.as_bytes())?;
        self.file.flush()?;
        if point.modes_t0.is_empty() {
            return Ok(());
        }
        let (n, m) = point.modes_t0.dim();
        let mut buf = Vec::with_capacity(24 + 16 * n * m);
        buf.extend_from_slice(&(index as u64).to_le_bytes());
        buf.extend_from_slice(&(n as u64).to_le_bytes());
        buf.extend_from_slice(&(m as u64).to_le_bytes());
        for z in point.modes_t0.iter() {
            buf.extend_from_slice(&z.re.to_le_bytes());
            buf.extend_from_slice(&z.im.to_le_bytes());
        }
        let target = sidecar(&self.path);
        let mut tmp = target.clone().into_os_string();
        tmp.push(".tmp");
        let tmp = PathBuf::from(tmp);
        {
            let mut f = File::create(&tmp)?;
            f.write_all(&buf)?;
            f.sync_all()?;
        }
        fs::rename(&tmp, &target)?;
        Ok(())
    }
}

/// Completed points recovered from a checkpoint.
#[derive(Clone, Debug)]
pub struct ResumeState {
    pub records: Vec<CheckpointRecord>,
    /// Modes of the last recovered point, columns indexed by branch.
    pub last_modes: Array2<C64>,
}

impl ResumeState {
    /// Reads a checkpoint. Records past the last saved modes, and a torn
    /// final line, are dropped. Returns `None` when nothing is usable.
    pub fn load(path: impl AsRef<Path>) -> Result<Option<Self>> {
        let path = path.as_ref();
        if !path.exists() {
            return Ok(None);
        }
        let mut records = vec![];
        for line in BufReader::new(File::open(path)?).lines() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            match serde_json::from_str::<CheckpointRecord>(&line) {
                Ok(r) => records.push(r),
                Err(e) => {
                    log::warn!("ignoring unreadable checkpoint line: {e}");
                    break;
                }
            }
        }
        let side = sidecar(path);
        if !side.exists() {
            return Ok(None);
        }
        let mut raw = vec![];
        File::open(&side)?.read_to_end(&mut raw)?;
        if raw.len() < 24 {
            return Ok(None);
        }
        let word = |k: usize| u64::from_le_bytes(raw[8 * k..8 * k + 8].try_into().expect("8 bytes")) as usize;
        let (index, n, m) = (word(0), word(1), word(2));
        if raw.len() != 24 + 16 * n * m {
            return invalid(format!("checkpoint modes file {} is truncated", side.display()));
        }
        let float = |k: usize| f64::from_le_bytes(raw[k..k + 8].try_into().expect("8 bytes"));
        let last_modes = Array2::from_shape_fn((n, m), |(i, j)| {
            let off = 24 + 16 * (i * m + j);
            C64::new(float(off), float(off + 8))
        });
        records.retain(|r| r.index <= index);
        match records.last() {
            Some(r) if r.index == index => Ok(Some(ResumeState { records, last_modes })),
            _ => Ok(None),
        }
    }
}

/// Linear extrapolation of the tuned drive frequency from the last two points.
pub fn extrapolate_frequency(points: &[FloquetPoint], eps: f64) -> Option<f64> {
    match points {
        [.., a, b] if b.eps_d > a.eps_d => Some(b.omega_d + (b.omega_d - a.omega_d) * (eps - b.eps_d) / (b.eps_d - a.eps_d)),
        [.., b] => Some(b.omega_d),
        [] => None,
    }
}

/// Sweeps the drive amplitude over `grid` (strictly increasing, starting at 0),
/// tuning the drive frequency and tracking branches by optimal overlap matching.
///
/// `omega_start` defaults to `2 (E_1 - E_0)`. Each finished point is passed to
/// `observer` and, when given, appended to the checkpoint.
pub fn sweep(
    sys: &FloquetSystem,
    grid: &[f64],
    omega_start: Option<f64>,
    cfg: &FloquetConfig,
    mut checkpoint: Option<&mut Checkpointer>,
    resume: Option<ResumeState>,
    observer: &mut dyn FnMut(usize, &FloquetPoint),
) -> Result<FloquetBranchSet> {
    cfg.validate()?;
    let n = sys.dim();
    if n < 2 {
        return invalid("a sweep needs at least two levels");
    }
    if grid.is_empty() || grid[0] != 0.0 {
        return invalid("the amplitude grid must start at 0");
    }
    if grid.windows(2).any(|w| !(w[1] > w[0])) {
        return invalid("the amplitude grid must be strictly increasing");
    }
    let mut points: Vec<FloquetPoint> = vec![];
    let mut prev: Array2<C64> = Array2::eye(n);
    if let Some(state) = resume {
        for r in &state.records {
            if r.index >= grid.len() || r.eps_d.to_bits() != grid[r.index].to_bits() {
                return invalid(format!("checkpoint point {} does not match the amplitude grid", r.index));
            }
        }
        if state.records.iter().enumerate().any(|(k, r)| r.index != k) {
            return invalid("checkpoint records are not contiguous");
        }
        if state.last_modes.dim() != (n, n) {
            return Err(Error::Dimension(format!("checkpoint modes are {:?}, expected {n}^2", state.last_modes.dim())));
        }
        points = state.records.iter().map(CheckpointRecord::to_point).collect();
        prev = state.last_modes;
        log::info!("resuming sweep after {} points", points.len());
    }
    let omega0 = omega_start.unwrap_or(2.0 * (sys.energies[1] - sys.energies[0]));
    for (idx, &eps) in grid.iter().enumerate().skip(points.len()) {
        let guess = extrapolate_frequency(&points, eps).unwrap_or(omega0);
        let mut p = solve_point(sys, eps, guess, &prev, cfg, true)?;
        if let Some(f) = &p.failure {
            log::warn!("eps_d={eps:.6e}: {f}");
        }
        for (mu, &lost) in p.lost.iter().enumerate() {
            if lost {
                log::debug!("eps_d={eps:.6e}: branch {mu} lost (fidelity {:.3})", p.tracking_fidelity[mu]);
            }
        }
        prev = p.modes_t0.clone();
        if let Some(c) = checkpoint.as_deref_mut() {
            c.append(idx, &p)?;
        }
        observer(idx, &p);
        if !cfg.keep_modes {
            p.modes_t0 = Array2::zeros((0, 0));
        }
        if !cfg.keep_samples {
            p.mode_samples.clear();
        }
        points.push(p);
    }
    let (kiss_events, crossing_events) = detect_events(&points, &sys.energies, &EventConfig::default());
    Ok(FloquetBranchSet { points, kiss_events, crossing_events })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Three levels with a weak 0-1 coupling and a 1-2 coupling that
    /// mediates a drive-induced crossing.
    fn three_level() -> FloquetSystem {
        let e = Array1::from(vec![0.0, 1.0, 1.9]);
        let mut v = Array2::<C64>::zeros((3, 3));
        v[[0, 1]] = C64::new(0.0, 1.0);
        v[[1, 0]] = C64::new(0.0, -1.0);
        v[[1, 2]] = C64::new(0.0, 1.4);
        v[[2, 1]] = C64::new(0.0, -1.4);
        FloquetSystem::new(e, v, None).unwrap()
    }

    fn cfg() -> FloquetConfig {
        FloquetConfig { n_steps: 128, n_samples: 16, tune_tol: 1e-9, keep_samples: true, ..Default::default() }
    }

    #[test]
    fn zero_drive_reproduces_folded_spectrum() {
        let sys = three_level();
        let p = solve_point(&sys, 0.0, 3.0, &Array2::eye(3), &cfg(), false).unwrap();
        assert_eq!(p.labels, vec![0, 1, 2]);
        for (k, &e) in sys.energies.iter().enumerate() {
            let want = (e + 1.5).rem_euclid(3.0) - 1.5;
            assert!((p.quasienergies[k] - want).abs() < 1e-10);
            assert!((p.tracking_fidelity[k] - 1.0).abs() < 1e-12);
        }
        // Folded quasienergies leave a harmonic phase e^{-i m omega t} per mode.
        for s in &p.mode_samples {
            let diff = s.mapv(|z| z.norm()) - p.modes_t0.mapv(|z| z.norm());
            assert!(diff.iter().all(|x| x.abs() < 1e-10));
        }
    }

    #[test]
    fn zero_drive_tuning_gives_twice_the_splitting() {
        let sys = three_level();
        let t = tune_drive_frequency(&sys, 0.0, 2.1, &Array2::eye(3), &cfg()).unwrap();
        assert!((t.omega_d - 2.0).abs() < 1e-9);
    }

    #[test]
    fn tuned_point_satisfies_resonance() {
        let sys = three_level();
        let p = solve_point(&sys, 0.05, 2.0, &Array2::eye(3), &cfg(), true).unwrap();
        assert!(p.failure.is_none());
        let d = (p.quasienergies[1] - p.quasienergies[0]).rem_euclid(p.omega_d);
        assert!((2.0 * d - p.omega_d).abs() < 1e-8);
    }

    #[test]
    fn stored_samples_match_direct_micromotion() {
        let sys = three_level();
        let c = cfg();
        let p = solve_point(&sys, 0.3, 2.0, &Array2::eye(3), &c, true).unwrap();
        let drive = DriveSpec::new(0.3, p.omega_d);
        let s = micromotion_samples(&sys, &drive, &p.modes_t0, &p.quasienergies, c.n_samples, c.n_steps).unwrap();
        assert_eq!(s.len(), p.mode_samples.len());
        for (a, b) in s.iter().zip(&p.mode_samples) {
            assert!(max_abs(&(a - b)) < 1e-10);
        }
    }

    #[test]
    fn sweep_tracks_and_resumes() {
        let sys = three_level();
        let grid: Vec<f64> = (0..12).map(|k| 0.02 * k as f64).collect();
        let c = FloquetConfig { n_steps: 64, n_samples: 8, tune_tol: 1e-10, ..Default::default() };
        let full = sweep(&sys, &grid, None, &c, None, None, &mut |_, _| {}).unwrap();
        for p in &full.points {
            let mut l = p.labels.clone();
            l.sort_unstable();
            assert_eq!(l, vec![0, 1, 2]);
        }
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("sweep.jsonl");
        {
            let mut ck = Checkpointer::create(&path).unwrap();
            sweep(&sys, &grid[..5], None, &c, Some(&mut ck), None, &mut |_, _| {}).unwrap();
        }
        let state = ResumeState::load(&path).unwrap().unwrap();
        assert_eq!(state.records.len(), 5);
        let mut ck = Checkpointer::open(&path).unwrap();
        let resumed = sweep(&sys, &grid, None, &c, Some(&mut ck), Some(state), &mut |_, _| {}).unwrap();
        for (a, b) in full.points.iter().zip(&resumed.points) {
            assert_eq!(a.labels, b.labels);
            assert_eq!(a.omega_d.to_bits(), b.omega_d.to_bits());
            assert_eq!(a.quasienergies, b.quasienergies);
        }
        assert_eq!(ResumeState::load(&path).unwrap().unwrap().records.len(), grid.len());
    }

    /// Branches 2 and 3 cross as the drive Stark-shifts level 3 through level 2;
    /// their direct coupling is tiny, so labels follow the diabatic states.
    #[test]
    fn labels_follow_diabatic_continuation() {
        let e = Array1::from(vec![0.0, 1.0, 1.45, 1.52, 4.0]);
        let mut v = Array2::<C64>::zeros((5, 5));
        let mut set = |i: usize, j: usize, x: f64| {
            v[[i, j]] = C64::new(0.0, x);
            v[[j, i]] = C64::new(0.0, -x);
        };
        set(0, 1, 0.01);
        set(2, 3, 1e-4);
        set(3, 4, 1.0);
        let sys = FloquetSystem::new(e, v, None).unwrap();
        let grid: Vec<f64> = (0..=20).map(|k| 0.025 * k as f64).collect();
        let c = FloquetConfig { n_steps: 128, n_samples: 8, tune_tol: 1e-10, ..Default::default() };
        let set = sweep(&sys, &grid, None, &c, None, None, &mut |_, _| {}).unwrap();
        let gap = |p: &FloquetPoint| p.quasienergies[3] - p.quasienergies[2];
        let first = &set.points[0];
        let last = set.points.last().unwrap();
        assert!(gap(first) > 0.0 && gap(last) < 0.0);
        for p in &set.points {
            assert!(p.modes_t0[[2, 2]].norm_sqr() > 0.9);
            assert!(p.modes_t0[[3, 3]].norm_sqr() > 0.8);
        }
    }

    #[test]
    fn grid_must_start_at_zero() {
        let sys = three_level();
        assert!(sweep(&sys, &[0.1, 0.2], None, &cfg(), None, None, &mut |_, _| {}).is_err());
        assert!(sweep(&sys, &[0.0, 0.2, 0.2], None, &cfg(), None, None, &mut |_, _| {}).is_err());
    }
}
