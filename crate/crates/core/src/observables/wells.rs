//! Well-localized superpositions of Floquet-mode pairs.

use ndarray::{Array1, Array2};

use crate::circuit::SpectralData;
use crate::error::{Error, Result};
use crate::floquet::FloquetPoint;
use crate::linalg::{dagger, C64};

/// Superpositions `(phi_i +- e^{i theta} phi_j) / sqrt 2` with maximally
/// separated `<a>`, and the resulting well centers `beta +- alpha`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PairWells {
    pub theta: f64,
    pub beta: C64,
    /// Half the separation; `Re(alpha) >= 0` fixes which state is `plus`.
    pub alpha: C64,
}

/// Phase optimization for modes `i`, `j` given `a` in the Floquet basis.
pub fn pair_wells(a: &Array2<C64>, i: usize, j: usize) -> PairWells {
    let (aii, ajj, aij, aji) = (a[[i, i]], a[[j, j]], a[[i, j]], a[[j, i]]);
    let mut theta = -0.5 * (aij * aji.conj()).arg();
    let diff = |th: f64| C64::from_polar(1.0, th) * aij + C64::from_polar(1.0, -th) * aji;
    let mut alpha = 0.5 * diff(theta);
    if alpha.re < 0.0 || (alpha.re == 0.0 && alpha.im < 0.0) {
        theta += std::f64::consts::PI;
        alpha = -alpha;
    }
    PairWells { theta: theta.rem_euclid(std::f64::consts::TAU), beta: 0.5 * (aii + ajj), alpha }
}

/// `|beta +- alpha>` approximated by the two lowest Floquet modes.
#[derive(Clone, Debug)]
pub struct WellStates {
    /// `(phi_0 + e^{i theta} phi_1) / sqrt 2` in the Floquet basis.
    pub plus: Array1<C64>,
    pub minus: Array1<C64>,
    pub theta: f64,
    pub beta: C64,
    pub alpha: C64,
    /// Set when the wells are not separated beyond the vacuum scale.
    pub degenerate: bool,
    /// `a` in the Floquet basis at `t = 0`.
    pub a_floquet: Array2<C64>,
}

/// Builds the well states of `point` in the basis of its first `dim` modes.
pub fn well_states(point: &FloquetPoint, sd: &SpectralData, dim: usize) -> Result<WellStates> {
    let a = sd.ops.a.as_ref().ok_or_else(|| Error::InvalidInput("spectrum carries no ladder operator".into()))?;
    if point.modes_t0.is_empty() {
        return Err(Error::InvalidInput("the Floquet point carries no modes".into()));
    }
    let n = point.modes_t0.ncols();
    let dim = dim.min(n);
    if dim < 2 {
        return Err(Error::Dimension("well states need at least two modes".into()));
    }
    let v = point.modes_t0.slice(ndarray::s![.., ..dim]).to_owned();
    let af = dagger(&v).dot(&a.dot(&v));
    let w = pair_wells(&af, 0, 1);
    let s = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let ph = C64::from_polar(1.0, w.theta);
    let mut plus = Array1::<C64>::zeros(dim);
    let mut minus = Array1::<C64>::zeros(dim);
    plus[0] = s;
    plus[1] = s * ph;
    minus[0] = s;
    minus[1] = -s * ph;
    Ok(WellStates { plus, minus, theta: w.theta, beta: w.beta, alpha: w.alpha, degenerate: w.alpha.norm() < 1.0, a_floquet: af })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::observables::coherent_state;
    use proptest::prelude::*;

    fn cat_basis(g: C64, n: usize) -> Array2<C64> {
        // Even and odd cats as modes 0 and 1, completed by the Fock states.
        let p = coherent_state(g, n);
        let m = coherent_state(-g, n);
        let norm = |v: Array1<C64>| {
            let s = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            v / C64::new(s, 0.0)
        };
        let even = norm(&p + &m);
        let odd = norm(&p - &m);
        let mut basis = Array2::<C64>::zeros((n, 2));
        basis.column_mut(0).assign(&even);
        basis.column_mut(1).assign(&odd);
        basis
    }

    fn ladder(n: usize) -> Array2<C64> {
        Array2::from_shape_fn((n, n), |(i, j)| if j == i + 1 { C64::new((j as f64).sqrt(), 0.0) } else { C64::new(0.0, 0.0) })
    }

    #[test]
    fn cats_give_coherent_wells() {
        let g = C64::new(2.0, 1.0);
        let v = cat_basis(g, 60);
        let af = dagger(&v).dot(&ladder(60).dot(&v));
        let w = pair_wells(&af, 0, 1);
        assert!((w.alpha - g).norm() < 1e-6, "{:?}", w.alpha);
        assert!(w.beta.norm() < 1e-9);
    }

    proptest! {
        #[test]
        fn invariant_under_mode_phase(chi in 0.0f64..6.283) {
            let g = C64::new(1.5, -0.7);
            let mut v = cat_basis(g, 50);
            let af = dagger(&v).dot(&ladder(50).dot(&v));
            let w0 = pair_wells(&af, 0, 1);
            let ph = C64::from_polar(1.0, chi);
            v.column_mut(1).mapv_inplace(|z| z * ph);
            let af = dagger(&v).dot(&ladder(50).dot(&v));
            let w1 = pair_wells(&af, 0, 1);
            prop_assert!((w0.alpha - w1.alpha).norm() < 1e-9);
            prop_assert!((w0.beta - w1.beta).norm() < 1e-9);
            let p0 = &v.column(0) + &(v.column(1).mapv(|z| z * C64::from_polar(1.0, w1.theta)));
            let mut v0 = cat_basis(g, 50);
            v0.column_mut(1).mapv_inplace(|z| z * C64::from_polar(1.0, w0.theta));
            let q0 = &v0.column(0) + &v0.column(1);
            prop_assert!((&p0 - &q0).iter().all(|z| z.norm() < 1e-9));
        }
    }
}
