//! Floquet matrix elements and quasidegeneracy classes.

use ndarray::{Array1, Array2};

use crate::error::{invalid, Error, Result};
use crate::floquet::FloquetPoint;
use crate::linalg::{dagger, C64};

/// `X_{mu nu k}` for `|k| <= k_max`.
#[derive(Clone, Debug)]
pub struct XTensor {
    pub k_max: usize,
    /// `data[k + k_max][[mu, nu]]`.
    pub data: Vec<Array2<C64>>,
}

impl XTensor {
    pub fn get(&self, mu: usize, nu: usize, k: i32) -> C64 {
        self.data[(k + self.k_max as i32) as usize][[mu, nu]]
    }

    pub fn dim(&self) -> usize {
        self.data.first().map_or(0, |a| a.nrows())
    }

    pub fn ks(&self) -> impl Iterator<Item = i32> {
        let k = self.k_max as i32;
        -k..=k
    }
}

/// `X_{mu nu k} = (1/N) sum_j e^{-i k omega_d t_j} <phi_mu(t_j)| op |phi_nu(t_j)>`
/// over `N` equally spaced samples of one period.
pub fn fourier_matrix_elements(samples: &[Array2<C64>], op: &Array2<C64>, k_max: usize) -> Result<XTensor> {
    let n_t = samples.len();
    if n_t < 4 * k_max + 4 {
        return Err(Error::Aliasing { n_t, k_max });
    }
    let n = samples[0].ncols();
    if op.nrows() != samples[0].nrows() {
        return Err(Error::Dimension(format!("operator is {:?}, modes are {:?}", op.dim(), samples[0].dim())));
    }
    let m: Vec<Array2<C64>> = samples.iter().map(|s| dagger(s).dot(&op.dot(s))).collect();
    let data = (-(k_max as i64)..=k_max as i64)
        .map(|k| {
            let mut acc = Array2::<C64>::zeros((n, n));
            for (j, mj) in m.iter().enumerate() {
                let ph = C64::from_polar(1.0 / n_t as f64, -std::f64::consts::TAU * (k * j as i64) as f64 / n_t as f64);
                acc.scaled_add(ph, mj);
            }
            acc
        })
        .collect();
    Ok(XTensor { k_max, data })
}

/// One transition `nu -> mu` with `k` drive photons.
#[derive(Clone, Debug, PartialEq)]
pub struct Transition {
    pub mu: usize,
    pub nu: usize,
    pub k: i32,
    /// `eps_mu - eps_nu + k omega_d`.
    pub delta: f64,
    /// Amplitude per bath channel.
    pub x: Vec<C64>,
}

impl Transition {
    pub fn weight(&self) -> f64 {
        self.x.iter().map(|z| z.norm()).sum()
    }
}

/// Retained transitions and their partition into quasidegeneracy classes.
#[derive(Clone, Debug)]
pub struct TransitionTable {
    pub omega_d: f64,
    pub entries: Vec<Transition>,
    /// Entry indices per class, each sorted by `delta`.
    pub classes: Vec<Vec<usize>>,
}

impl TransitionTable {
    /// Class containing entry `(mu, nu, k)`, if retained.
    pub fn class_of(&self, mu: usize, nu: usize, k: i32) -> Option<usize> {
        self.classes.iter().position(|c| {
            c.iter().any(|&e| {
                let t = &self.entries[e];
                t.mu == mu && t.nu == nu && t.k == k
            })
        })
    }

    pub fn entry(&self, mu: usize, nu: usize, k: i32) -> Option<&Transition> {
        self.entries.iter().find(|t| t.mu == mu && t.nu == nu && t.k == k)
    }
}

/// Enumerates transitions among the first `level_cut` branches with any
/// channel amplitude `>= element_floor`, grouped by single-linkage on `delta`
/// under `threshold`.
pub fn build_transition_table(
    point: &FloquetPoint,
    x: &[XTensor],
    level_cut: Option<usize>,
    element_floor: f64,
    threshold: f64,
) -> Result<TransitionTable> {
    if x.is_empty() {
        return invalid("at least one channel is required");
    }
    let n = x[0].dim();
    if x.iter().any(|t| t.dim() != n || t.k_max != x[0].k_max) {
        return invalid("channel tensors differ in shape");
    }
    if point.quasienergies.len() != n {
        return Err(Error::Dimension(format!("{} quasienergies for {n} modes", point.quasienergies.len())));
    }
    let cut = level_cut.unwrap_or(n).min(n);
    let q: &Array1<f64> = &point.quasienergies;
    let w = point.omega_d;
    let mut entries = vec![];
    for k in x[0].ks() {
        for mu in 0..cut {
            for nu in 0..cut {
                let amps: Vec<C64> = x.iter().map(|t| t.get(mu, nu, k)).collect();
                if amps.iter().any(|z| z.norm() >= element_floor) {
                    entries.push(Transition { mu, nu, k, delta: q[mu] - q[nu] + k as f64 * w, x: amps });
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..entries.len()).collect();
    order.sort_by(|&a, &b| entries[a].delta.total_cmp(&entries[b].delta).then(a.cmp(&b)));
    let mut classes: Vec<Vec<usize>> = vec![];
    let mut last = f64::NEG_INFINITY;
    for &e in &order {
        let d = entries[e].delta;
        if d - last < threshold {
            classes.last_mut().expect("a class is open").push(e);
        } else {
            classes.push(vec![e]);
        }
        last = d;
    }
    Ok(TransitionTable { omega_d: w, entries, classes })
}
