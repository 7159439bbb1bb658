//! Husimi and Wigner functions on a rectangular grid in the `alpha` plane.

use ndarray::{Array1, Array2, Axis};
use serde::{Deserialize, Serialize};

use crate::circuit::SpectralData;
use crate::error::{invalid, Error, Result};
use crate::linalg::{dagger, C64};

/// Uniform grid over `Re(alpha)` x `Im(alpha)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseGrid {
    pub re_range: (f64, f64),
    pub im_range: (f64, f64),
    pub n_points: usize,
}

impl PhaseGrid {
    /// Square grid covering `center +- extent`.
    pub fn square(extent: f64, n_points: usize) -> Self {
        PhaseGrid { re_range: (-extent, extent), im_range: (-extent, extent), n_points }
    }

    /// Default coverage `+-(|alpha| + |beta| + 3)` with 64 points per axis.
    pub fn for_wells(alpha: C64, beta: C64) -> Self {
        Self::square(alpha.norm() + beta.norm() + 3.0, 64)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_points < 2 {
            return invalid("phase grid needs at least two points per axis");
        }
        if !(self.re_range.1 > self.re_range.0 && self.im_range.1 > self.im_range.0) {
            return invalid("phase grid ranges must be increasing");
        }
        Ok(())
    }

    pub fn re(&self) -> Array1<f64> {
        Array1::linspace(self.re_range.0, self.re_range.1, self.n_points)
    }

    pub fn im(&self) -> Array1<f64> {
        Array1::linspace(self.im_range.0, self.im_range.1, self.n_points)
    }

    /// Area element `d Re(alpha) d Im(alpha)`.
    pub fn cell(&self) -> f64 {
        let m = (self.n_points - 1) as f64;
        (self.re_range.1 - self.re_range.0) / m * (self.im_range.1 - self.im_range.0) / m
    }

    /// Grid points in row-major order `[im, re]`.
    pub fn points(&self) -> Vec<C64> {
        let (re, im) = (self.re(), self.im());
        im.iter().flat_map(|&y| re.iter().map(move |&x| C64::new(x, y))).collect()
    }

    pub fn integrate(&self, field: &Array2<f64>) -> f64 {
        field.sum() * self.cell()
    }
}

/// Fock amplitudes of the coherent state `|gamma>` truncated to `dim`.
pub fn coherent_state(gamma: C64, dim: usize) -> Array1<C64> {
    let mut v = Array1::<C64>::zeros(dim);
    if dim == 0 {
        return v;
    }
    v[0] = C64::new((-0.5 * gamma.norm_sqr()).exp(), 0.0);
    for m in 1..dim {
        v[m] = v[m - 1] * gamma / (m as f64).sqrt();
    }
    v
}

/// `Q(gamma) = <gamma| rho |gamma> / pi` for a Fock-basis density matrix.
pub fn husimi_fock(rho: &Array2<C64>, grid: &PhaseGrid) -> Result<Array2<f64>> {
    grid.validate()?;
    let n = rho.nrows();
    let pts = grid.points();
    let mut c = Array2::<C64>::zeros((n, pts.len()));
    for (j, &g) in pts.iter().enumerate() {
        c.column_mut(j).assign(&coherent_state(g, n));
    }
    let rc = rho.dot(&c);
    let q: Vec<f64> = (0..pts.len())
        .map(|j| c.column(j).iter().zip(rc.column(j).iter()).map(|(a, b)| (a.conj() * b).re).sum::<f64>() / std::f64::consts::PI)
        .collect();
    Ok(Array2::from_shape_vec((grid.n_points, grid.n_points), q).expect("grid shape"))
}

/// Wigner function in the `alpha` plane, normalized to the trace over `d^2 alpha`.
///
/// Laguerre-polynomial recursion over Fock matrix elements.
pub fn wigner_fock(rho: &Array2<C64>, grid: &PhaseGrid) -> Result<Array2<f64>> {
    grid.validate()?;
    let dim = rho.nrows();
    let pts = grid.points();
    let np = pts.len();
    let a2: Vec<C64> = pts.iter().map(|&p| p * 2.0).collect();
    let mut w = vec![0.0f64; np];
    let mut wl: Vec<Vec<C64>> = vec![vec![C64::new(0.0, 0.0); np]; dim];
    for (j, &p) in pts.iter().enumerate() {
        wl[0][j] = C64::new((-2.0 * p.norm_sqr()).exp() / std::f64::consts::PI, 0.0);
        w[j] = rho[[0, 0]].re * wl[0][j].re;
    }
    for n in 1..dim {
        let s = (n as f64).sqrt();
        for j in 0..np {
            wl[n][j] = a2[j] * wl[n - 1][j] / s;
            w[j] += 2.0 * (rho[[0, n]] * wl[n][j]).re;
        }
    }
    for m in 1..dim {
        let sm = (m as f64).sqrt();
        let mut temp = wl[m].clone();
        for j in 0..np {
            wl[m][j] = (a2[j].conj() * temp[j] - sm * wl[m - 1][j]) / sm;
            w[j] += (rho[[m, m]] * wl[m][j]).re;
        }
        for n in m + 1..dim {
            let sn = (n as f64).sqrt();
            for j in 0..np {
                let t2 = (a2[j] * wl[n - 1][j] - sm * temp[j]) / sn;
                temp[j] = wl[n][j];
                wl[n][j] = t2;
                w[j] += 2.0 * (rho[[m, n]] * wl[n][j]).re;
            }
        }
    }
    let w: Vec<f64> = w.into_iter().map(|x| 2.0 * x).collect();
    Ok(Array2::from_shape_vec((grid.n_points, grid.n_points), w).expect("grid shape"))
}

/// Reduced SNAIL Fock density matrix of a Floquet-basis state.
///
/// `modes` holds the Floquet modes used as basis (dressed x m).
pub fn to_snail_fock(sd: &SpectralData, modes: &Array2<C64>, rho: &Array2<C64>) -> Result<Array2<C64>> {
    let dressed = modes.dot(&rho.dot(&dagger(modes)));
    sd.snail_fock_density(&dressed).ok_or_else(|| Error::InvalidInput("spectrum carries no Fock map".into()))
}

/// Coherent-state overlaps in a Floquet basis for fast Husimi evaluation.
#[derive(Clone, Debug)]
pub struct HusimiProjector {
    pub grid: PhaseGrid,
    /// Per secondary level `j`: `<phi_mu | gamma, j>` as `m x n_grid`.
    g: Vec<Array2<C64>>,
}

impl HusimiProjector {
    /// `modes` are the Floquet modes (dressed x m) forming the state basis.
    pub fn new(sd: &SpectralData, modes: &Array2<C64>, grid: PhaseGrid) -> Result<Self> {
        grid.validate()?;
        let map = sd.fock_map.as_ref().ok_or_else(|| Error::InvalidInput("spectrum carries no Fock map".into()))?;
        let n_fock = map.snail.nrows();
        let ns = map.snail.ncols();
        let d = map.secondary_dim;
        let pts = grid.points();
        let mut c = Array2::<C64>::zeros((n_fock, pts.len()));
        for (j, &p) in pts.iter().enumerate() {
            c.column_mut(j).assign(&coherent_state(p, n_fock));
        }
        let snail_coeff = dagger(&map.snail).dot(&c);
        let sdag = dagger(&sd.states);
        let mdag = dagger(modes);
        let mut g = Vec::with_capacity(d);
        for level in 0..d {
            let rows: Vec<usize> = (0..ns).map(|s| s * d + level).collect();
            let sub = sdag.select(Axis(1), &rows);
            g.push(mdag.dot(&sub.dot(&snail_coeff)));
        }
        Ok(HusimiProjector { grid, g })
    }

    /// Overlaps `<phi_mu | gamma, 0>` for a single point off the grid.
    pub fn coherent_in_modes(sd: &SpectralData, modes: &Array2<C64>, gamma: C64) -> Result<Array1<C64>> {
        let map = sd.fock_map.as_ref().ok_or_else(|| Error::InvalidInput("spectrum carries no Fock map".into()))?;
        let d = map.secondary_dim;
        let c = dagger(&map.snail).dot(&coherent_state(gamma, map.snail.nrows()));
        let mut v = Array1::<C64>::zeros(sd.states.nrows());
        for (s, &x) in c.iter().enumerate() {
            v[s * d] = x;
        }
        Ok(dagger(modes).dot(&dagger(&sd.states).dot(&v)))
    }

    /// `Q(gamma)` of a density matrix in the Floquet basis.
    pub fn husimi(&self, rho: &Array2<C64>) -> Array2<f64> {
        let np = self.grid.n_points * self.grid.n_points;
        let mut q = vec![0.0; np];
        for g in &self.g {
            let rg = rho.dot(g);
            for (j, slot) in q.iter_mut().enumerate() {
                *slot += g.column(j).iter().zip(rg.column(j).iter()).map(|(a, b)| (a.conj() * b).re).sum::<f64>();
            }
        }
        Array2::from_shape_vec((self.grid.n_points, self.grid.n_points), q)
            .expect("grid shape")
            .mapv(|x| x / std::f64::consts::PI)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pure(v: &Array1<C64>) -> Array2<C64> {
        let n = v.len();
        Array2::from_shape_fn((n, n), |(i, j)| v[i] * v[j].conj())
    }

    fn argmax(f: &Array2<f64>, grid: &PhaseGrid) -> C64 {
        let (mut best, mut at) = (f64::NEG_INFINITY, 0);
        for (k, &x) in f.iter().enumerate() {
            if x > best {
                best = x;
                at = k;
            }
        }
        grid.points()[at]
    }

    #[test]
    fn vacuum_husimi_and_wigner() {
        let grid = PhaseGrid::square(4.0, 81);
        let mut rho = Array2::<C64>::zeros((10, 10));
        rho[[0, 0]] = C64::new(1.0, 0.0);
        let q = husimi_fock(&rho, &grid).unwrap();
        assert!((q[[40, 40]] - 1.0 / std::f64::consts::PI).abs() < 1e-14);
        assert!((grid.integrate(&q) - 1.0).abs() < 1e-6);
        let w = wigner_fock(&rho, &grid).unwrap();
        assert!((w[[40, 40]] - 2.0 / std::f64::consts::PI).abs() < 1e-14);
        assert!((grid.integrate(&w) - 1.0).abs() < 1e-6);
    }

    #[test]
    fn coherent_state_peaks_at_its_amplitude() {
        let g0 = C64::new(1.0, -1.5);
        let grid = PhaseGrid::square(4.0, 81);
        let rho = pure(&coherent_state(g0, 40));
        let q = husimi_fock(&rho, &grid).unwrap();
        let w = wigner_fock(&rho, &grid).unwrap();
        assert!((argmax(&q, &grid) - g0).norm() < 1e-9);
        assert!((argmax(&w, &grid) - g0).norm() < 1e-9);
        assert!((grid.integrate(&w) - 1.0).abs() < 1e-6);
    }

    #[test]
    fn wigner_of_fock_one_is_negative_at_origin() {
        let grid = PhaseGrid::square(3.0, 61);
        let mut rho = Array2::<C64>::zeros((4, 4));
        rho[[1, 1]] = C64::new(1.0, 0.0);
        let w = wigner_fock(&rho, &grid).unwrap();
        assert!((w[[30, 30]] + 2.0 / std::f64::consts::PI).abs() < 1e-12);
    }

    #[test]
    fn cat_wigner_matches_closed_form() {
        // W(0) = (2/pi) <parity>, and an even cat has parity +1.
        let g = C64::new(1.2, 0.4);
        let v = &coherent_state(g, 40) + &coherent_state(-g, 40);
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let rho = pure(&(v / C64::new(norm, 0.0)));
        let grid = PhaseGrid { re_range: (0.0, 0.1), im_range: (0.0, 0.1), n_points: 2 };
        let w = wigner_fock(&rho, &grid).unwrap();
        let want = 2.0 / std::f64::consts::PI;
        assert!((w[[0, 0]] - want).abs() < 1e-10, "{} vs {want}", w[[0, 0]]);
    }
}
