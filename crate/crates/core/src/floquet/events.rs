//! Refolded spectra, spectral kissings and avoided crossings.

use ndarray::{Array1, Array2};
use serde::{Deserialize, Serialize};

use super::FloquetPoint;
use crate::units::khz;

/// Quasienergy differences `eps_mu - eps_0` unfolded along the sweep and
/// refolded modulo `omega_d / 2` into `[-omega_d/4, omega_d/4)`.
#[derive(Clone, Debug)]
pub struct RefoldedSpectrum {
    pub eps_d: Vec<f64>,
    pub omega_d: Vec<f64>,
    /// `[point, branch]`, continuous along the sweep.
    pub unfolded: Array2<f64>,
    /// `[point, branch]`.
    pub refolded: Array2<f64>,
    /// Branches whose unfolding passed through a point where they were lost.
    pub ambiguous: Vec<bool>,
}

impl RefoldedSpectrum {
    /// Refolded distance between two branches at point `k`, modulo `omega_d / 2`.
    pub fn gap(&self, k: usize, a: usize, b: usize) -> f64 {
        let half = 0.5 * self.omega_d[k];
        let d = (self.refolded[[k, a]] - self.refolded[[k, b]]).rem_euclid(half);
        d.min(half - d)
    }
}

/// Unfolds `eps_mu - eps_0` by nearest-integer continuation in units of
/// `omega_d`, starting from the undriven differences `energies[mu] - energies[0]`.
pub fn kissing_transform(points: &[FloquetPoint], energies: &Array1<f64>) -> RefoldedSpectrum {
    let np = points.len();
    let nb = points.first().map_or(0, |p| p.quasienergies.len());
    let mut unfolded = Array2::zeros((np, nb));
    let mut refolded = Array2::zeros((np, nb));
    let mut ambiguous = vec![false; nb];
    for (k, p) in points.iter().enumerate() {
        let w = p.omega_d;
        for mu in 0..nb {
            let raw = p.quasienergies[mu] - p.quasienergies[0];
            let reference = if k == 0 { energies[mu] - energies[0] } else { unfolded[[k - 1, mu]] };
            let m = ((reference - raw) / w).round();
            let u = raw + m * w;
            unfolded[[k, mu]] = u;
            let half = 0.5 * w;
            refolded[[k, mu]] = (u + 0.5 * half).rem_euclid(half) - 0.5 * half;
            if p.lost.get(mu).copied().unwrap_or(false) {
                ambiguous[mu] = true;
            }
        }
    }
    RefoldedSpectrum {
        eps_d: points.iter().map(|p| p.eps_d).collect(),
        omega_d: points.iter().map(|p| p.omega_d).collect(),
        unfolded,
        refolded,
        ambiguous,
    }
}

/// Thresholds for [`detect_events`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EventConfig {
    /// Refolded gap below which a pair is kissing (rad/s).
    pub kiss_tol: f64,
    /// Tracking fidelity below which a local minimum marks a crossing.
    pub fid_tol: f64,
    /// Overlap with another branch needed to name it as the crossing partner.
    pub partner_floor: f64,
    /// Only branches `0..n_branches` are examined (all when `None`).
    pub n_branches: Option<usize>,
}

impl Default for EventConfig {
    fn default() -> Self {
        EventConfig { kiss_tol: khz(100.0), fid_tol: 0.99, partner_floor: 0.05, n_branches: None }
    }
}

/// Pair `(2j, 2j + 1)` entering a kissing at `eps_d`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KissEvent {
    pub pair: (usize, usize),
    pub eps_d: f64,
    pub index: usize,
}

/// Local tracking-fidelity minimum of `branch`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CrossingEvent {
    pub branch: usize,
    pub partner: Option<usize>,
    pub eps_d: f64,
    pub index: usize,
    pub min_fidelity: f64,
}

/// Kissing pairs and avoided crossings along a tracked sweep.
///
/// A kiss is the first point from which a pair's refolded gap stays below
/// `kiss_tol`; a crossing is a local minimum of tracking fidelity below `fid_tol`.
pub fn detect_events(
    points: &[FloquetPoint],
    energies: &Array1<f64>,
    cfg: &EventConfig,
) -> (Vec<KissEvent>, Vec<CrossingEvent>) {
    if points.is_empty() {
        return (vec![], vec![]);
    }
    let nb = cfg.n_branches.unwrap_or(usize::MAX).min(points[0].quasienergies.len());
    let spec = kissing_transform(points, energies);
    let mut kisses = vec![];
    for a in (2..nb.saturating_sub(1)).step_by(2) {
        let b = a + 1;
        let below: Vec<bool> = (0..points.len()).map(|k| spec.gap(k, a, b) < cfg.kiss_tol).collect();
        if let Some(start) = (0..below.len()).rev().take_while(|&k| below[k]).last() {
            kisses.push(KissEvent { pair: (a, b), eps_d: points[start].eps_d, index: start });
        }
    }
    let mut crossings = vec![];
    for mu in 0..nb {
        let f: Vec<f64> = points.iter().map(|p| p.tracking_fidelity[mu]).collect();
        for k in 1..f.len() {
            let left = f[k] <= f[k - 1];
            let right = k + 1 == f.len() || f[k] < f[k + 1];
            if left && right && f[k] < cfg.fid_tol {
                let (partner, w) = points[k].partner[mu];
                crossings.push(CrossingEvent {
                    branch: mu,
                    partner: (w >= cfg.partner_floor && partner != mu).then_some(partner),
                    eps_d: points[k].eps_d,
                    index: k,
                    min_fidelity: f[k],
                });
            }
        }
    }
    (kisses, crossings)
}
