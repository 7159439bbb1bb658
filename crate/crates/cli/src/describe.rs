//! Human-readable summary of a sweep: staircase plateaus and their steps.

use std::fmt;

use crate::result::{RowStatus, SweepResult};

/// A kissing event and the jump of the tunneling time across it.
#[derive(Clone, Debug, PartialEq)]
pub struct Step {
    pub pair: (usize, usize),
    pub eps_d_hz: f64,
    /// Median tau after the step over median tau before it (`None` without data on both sides).
    pub factor: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Summary {
    pub rows: usize,
    pub analyzed: usize,
    pub failed: usize,
    pub eps_range_hz: Option<(f64, f64)>,
    pub plateaus: usize,
    pub steps: Vec<Step>,
    pub tau_range: Option<(f64, f64)>,
    pub min_fidelity: Option<(f64, f64)>,
    pub crossings: usize,
}

fn median(mut v: Vec<f64>) -> Option<f64> {
    if v.is_empty() {
        return None;
    }
    v.sort_by(f64::total_cmp);
    Some(v[v.len() / 2])
}

/// Plateaus are the intervals between kissing events inside the analyzed
/// range; each step reports the tau ratio over up to `window` rows per side.
pub fn summarize(r: &SweepResult, window: usize) -> Summary {
    let analyzed: Vec<_> = r.analyzed().collect();
    let tau = |row: &crate::result::Row| row.tau_gap.or(row.tau_dyn);
    let eps_range_hz = match (analyzed.first(), analyzed.last()) {
        (Some(a), Some(b)) => Some((a.eps_d_hz, b.eps_d_hz)),
        _ => None,
    };
    let mut events: Vec<_> = r
        .kiss_events
        .iter()
        .filter(|k| eps_range_hz.is_some_and(|(lo, hi)| k.eps_d_hz > lo && k.eps_d_hz <= hi))
        .collect();
    events.sort_by(|a, b| a.eps_d_hz.total_cmp(&b.eps_d_hz));
    let steps: Vec<Step> = events
        .iter()
        .map(|k| {
            let before: Vec<f64> = analyzed.iter().filter(|x| x.index < k.index).rev().take(window).filter_map(|x| tau(x)).collect();
            let after: Vec<f64> = analyzed.iter().filter(|x| x.index >= k.index).take(window).filter_map(|x| tau(x)).collect();
            let factor = match (median(before), median(after)) {
                (Some(b), Some(a)) if b > 0.0 => Some(a / b),
                _ => None,
            };
            Step { pair: k.pair, eps_d_hz: k.eps_d_hz, factor }
        })
        .collect();
    let taus: Vec<f64> = analyzed.iter().filter_map(|x| tau(x)).collect();
    let tau_range = (!taus.is_empty()).then(|| {
        (taus.iter().copied().fold(f64::INFINITY, f64::min), taus.iter().copied().fold(0.0, f64::max))
    });
    let min_fidelity = r
        .rows
        .iter()
        .filter_map(|x| x.min_fidelity.map(|f| (f, x.eps_d_hz)))
        .min_by(|a, b| a.0.total_cmp(&b.0));
    Summary {
        rows: r.rows.len(),
        analyzed: analyzed.len(),
        failed: r.rows.iter().filter(|x| x.status == RowStatus::Failed).count(),
        eps_range_hz,
        plateaus: if analyzed.is_empty() { 0 } else { steps.len() + 1 },
        steps,
        tau_range,
        min_fidelity,
        crossings: r.crossing_events.len(),
    }
}

impl fmt::Display for Summary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "rows: {} ({} analyzed, {} failed)", self.rows, self.analyzed, self.failed)?;
        if let Some((lo, hi)) = self.eps_range_hz {
            writeln!(f, "analyzed amplitudes: {:.4} .. {:.4} GHz", lo / 1e9, hi / 1e9)?;
        }
        if let Some((lo, hi)) = self.tau_range {
            writeln!(f, "tunneling time: {lo:.4e} .. {hi:.4e} s")?;
        }
        writeln!(f, "plateaus: {}", self.plateaus)?;
        for s in &self.steps {
            let factor = s.factor.map_or("n/a".to_string(), |x| format!("x{x:.2}"));
            writeln!(f, "  step at {:.4} GHz: pair ({}, {}) kisses, tau {factor}", s.eps_d_hz / 1e9, s.pair.0, s.pair.1)?;
        }
        if let Some((fid, eps)) = self.min_fidelity {
            writeln!(f, "lowest tracking fidelity: {fid:.6} at {:.4} GHz", eps / 1e9)?;
        }
        write!(f, "avoided crossings: {}", self.crossings)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::result::{KissRecord, Provenance, Row};

    fn staircase() -> SweepResult {
        let rows = (0..30)
            .map(|i| {
                let tau = if i < 10 { 1e-3 } else if i < 20 { 5e-3 } else { 4e-2 };
                Row {
                    index: i,
                    eps_d_hz: 1e8 * i as f64,
                    status: RowStatus::Ok,
                    error: None,
                    omega_d_hz: Some(12e9),
                    tune_converged: Some(true),
                    quasienergies_hz: vec![],
                    photon_0: None,
                    photon_1: None,
                    min_fidelity: Some(1.0 - 1e-4 * i as f64),
                    gap: Some(1.0 / tau),
                    tau_gap: Some(tau),
                    tau_dyn: None,
                    t_z: None,
                    alpha_abs: None,
                }
            })
            .collect();
        SweepResult {
            provenance: Provenance {
                config_hash: String::new(),
                code_version: String::new(),
                preset: None,
                scenario: "single-mode".into(),
                n_keep: 0,
                n_steps: 0,
                n_samples: 0,
                level_cut: 0,
                k_max: 0,
                time_points: 0,
                phase_points: 0,
                delta_eps_hz: 1e8,
                created_unix: 0,
            },
            n_quasienergies: 0,
            rows,
            kiss_events: vec![
                KissRecord { pair: (2, 3), eps_d_hz: 1e9, index: 10 },
                KissRecord { pair: (4, 5), eps_d_hz: 2e9, index: 20 },
            ],
            crossing_events: vec![],
        }
    }

    #[test]
    fn staircase_plateaus_and_steps() {
        let s = summarize(&staircase(), 3);
        assert_eq!(s.plateaus, 3);
        assert_eq!(s.steps.len(), 2);
        assert!((s.steps[0].factor.unwrap() - 5.0).abs() < 1e-12);
        assert!((s.steps[1].factor.unwrap() - 8.0).abs() < 1e-12);
        let text = s.to_string();
        assert!(text.contains("plateaus: 3"));
        assert!(text.contains("step at 1.0000 GHz"));
    }
}
