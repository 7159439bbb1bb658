//! Eigen-decomposition of the one-period propagator.

use ndarray::{Array1, Array2, Axis};

use crate::error::{Error, Result};
use crate::linalg::{dagger, eigh, max_abs, schur, C64};

/// Folds `x` into `[-omega/2, omega/2)`.
pub fn fold(x: f64, omega: f64) -> f64 {
    let y = (x + 0.5 * omega).rem_euclid(omega) - 0.5 * omega;
    if y >= 0.5 * omega {
        y - omega
    } else {
        y
    }
}

/// Rotates each column so its largest-magnitude component is real positive.
pub fn gauge_fix(v: &mut Array2<C64>) {
    for mut col in v.axis_iter_mut(Axis(1)) {
        let mut best = 0usize;
        let mut mag = -1.0f64;
        for (k, z) in col.iter().enumerate() {
            // Prefer the earlier index unless clearly larger, for stability.
            if z.norm() > mag * (1.0 + 1e-9) {
                mag = z.norm();
                best = k;
            }
        }
        if mag > 0.0 {
            let phase = col[best].conj() / mag;
            col.mapv_inplace(|z| z * phase);
        }
    }
}

/// Quasienergies in `[-omega_d/2, omega_d/2)` and orthonormal Floquet modes at `t = 0`.
pub fn floquet_decompose(u: &Array2<C64>, omega_d: f64) -> Result<(Array1<f64>, Array2<C64>)> {
    let t = std::f64::consts::TAU / omega_d;
    let (w, mut z) = schur(u)?;
    let recon = z.dot(&Array2::from_diag(&w)).dot(&dagger(&z));
    let res = max_abs(&(recon - u));
    if res > 1e-8 {
        return Err(Error::Unitarity(res));
    }
    let q = w.mapv(|l| fold(-l.arg() / t, omega_d));
    gauge_fix(&mut z);
    Ok((q, z))
}

/// Re-expresses eigenvectors within clusters of nearly equal quasienergies
/// in the basis closest to the previous point's modes.
///
/// Returns the number of clusters touched.
pub fn align_degenerate_clusters(
    q: &Array1<f64>,
    v: &mut Array2<C64>,
    prev: &Array2<C64>,
    omega_d: f64,
    tol: f64,
) -> Result<usize> {
    let n = q.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| q[a].total_cmp(&q[b]));
    let mut clusters: Vec<Vec<usize>> = vec![];
    let mut cur = vec![order[0]];
    for w in order.windows(2) {
        if q[w[1]] - q[w[0]] < tol * omega_d {
            cur.push(w[1]);
        } else {
            clusters.push(std::mem::take(&mut cur));
            cur.push(w[1]);
        }
    }
    clusters.push(cur);
    // The zone is periodic: merge the first and last cluster across the edge.
    if clusters.len() > 1 {
        let first = q[clusters[0][0]];
        let last = q[*clusters.last().unwrap().last().unwrap()];
        if first + omega_d - last < tol * omega_d {
            let tail = clusters.pop().unwrap();
            clusters[0].extend(tail);
        }
    }
    let mut touched = 0;
    for c in clusters.into_iter().filter(|c| c.len() > 1) {
        touched += 1;
        let m = c.len();
        let sub = v.select(Axis(1), &c);
        let ov = dagger(&sub).dot(prev);
        let mut weight: Vec<(f64, usize)> =
            (0..prev.ncols()).map(|p| (ov.column(p).iter().map(|z| z.norm_sqr()).sum::<f64>(), p)).collect();
        weight.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
        let mut picked: Vec<usize> = weight.iter().take(m).map(|x| x.1).collect();
        picked.sort_unstable();
        let o = ov.select(Axis(1), &picked);
        // Loewdin orthonormalization: o (o^dag o)^(-1/2).
        let g = dagger(&o).dot(&o);
        let (lam, s) = eigh(&g)?;
        if lam[0] < 1e-12 {
            continue;
        }
        let inv_sqrt = Array2::from_diag(&lam.mapv(|x| C64::new(1.0 / x.sqrt(), 0.0)));
        let rot = o.dot(&s.dot(&inv_sqrt).dot(&dagger(&s)));
        let aligned = sub.dot(&rot);
        for (k, &col) in c.iter().enumerate() {
            v.column_mut(col).assign(&aligned.column(k));
        }
    }
    Ok(touched)
}
