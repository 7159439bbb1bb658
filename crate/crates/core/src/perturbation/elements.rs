//! Fourier coefficients of the transformed annihilation and charge operators
//! and the analytic Floquet matrix elements built from them.

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use super::{annihilation, DisplacedFrameParams, EffectiveHamiltonian};
use crate::error::{invalid, Error, Result};
use crate::linalg::{dagger, C64, I};

/// Largest `|n|` with a tabulated coefficient.
pub const SHIRLEY_ORDER: i32 = 4;

fn check_order(n: i32) -> Result<()> {
    if n.abs() > SHIRLEY_ORDER {
        return invalid(format!("harmonic {n} outside the tabulated range [-4, 4]"));
    }
    Ok(())
}

struct Ops {
    a: Array2<C64>,
    ad: Array2<C64>,
    one: Array2<C64>,
}

impl Ops {
    fn new(dim: usize) -> Self {
        let a = annihilation(dim);
        let ad = dagger(&a);
        Ops { a, ad, one: Array2::eye(dim) }
    }

    fn num(&self) -> Array2<C64> {
        self.ad.dot(&self.a)
    }
}

fn c(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Coefficient `a~_n` of `a~(t) = sum_n a~_n e^{i n omega_d t / 2}` to first order.
pub fn a_tilde(p: &DisplacedFrameParams, n: i32, dim: usize) -> Result<Array2<C64>> {
    check_order(n)?;
    let (w0, wd, g3) = (p.osc.omega_0, p.omega_d, p.osc.g3);
    let (pi, pib) = (p.pi, p.pi.conj());
    let o = Ops::new(dim);
    Ok(match n {
        -4 => &o.one * (pi * pi * g3 / (2.0 * wd - w0)),
        -3 => &o.a * (pi * (2.0 * g3 / wd)),
        -2 => o.a.dot(&o.a) * c(g3 / w0) + &o.one * (pi * ((wd + w0) / (2.0 * wd))),
        -1 => o.a.clone(),
        0 => (o.num() * c(2.0) + &o.one * c(1.0 + 2.0 * p.pi.norm_sqr())) * c(-g3 / w0),
        1 => &o.a * (pib * (-2.0 * g3 / wd)),
        2 => o.ad.dot(&o.ad) * c(-g3 / (3.0 * w0)) + &o.one * (pib * ((wd - w0) / (2.0 * wd))),
        3 => &o.ad * (pib * (-2.0 * g3 / (2.0 * w0 + wd))),
        _ => &o.one * (pib * pib * (-g3 / (w0 + 2.0 * wd))),
    })
}

/// `p~_n = i (a~_{-n}^dag - a~_n)`, the Fourier coefficients of `i(a~^dag - a~)`.
pub fn p_tilde(p: &DisplacedFrameParams, n: i32, dim: usize) -> Result<Array2<C64>> {
    check_order(n)?;
    Ok((dagger(&a_tilde(p, -n, dim)?) - a_tilde(p, n, dim)?) * I)
}

/// First-order generator coefficient `G_n^(1)` for `|n| <= 6`, with `G_{-n} = G_n^dag`.
pub fn generator_first_order(p: &DisplacedFrameParams, n: i32, dim: usize) -> Result<Array2<C64>> {
    if n.abs() > 6 {
        return invalid(format!("generator harmonic {n} outside [-6, 6]"));
    }
    if n < 0 {
        return Ok(dagger(&generator_first_order(p, -n, dim)?));
    }
    let (w0, wd, g3) = (p.osc.omega_0, p.omega_d, p.osc.g3);
    let pib = p.pi.conj();
    let pi2 = p.pi.norm_sqr();
    let o = Ops::new(dim);
    let mi = -I;
    Ok(match n {
        0 => Array2::zeros((dim, dim)),
        1 => (o.ad.dot(&o.ad).dot(&o.a) + &o.ad * c(1.0 + 2.0 * pi2)) * (mi * g3 / w0),
        2 => (o.num() * c(2.0) + &o.one * c(1.0 + pi2)) * (mi * g3 / wd * pib),
        3 => o.ad.dot(&o.ad).dot(&o.ad) * (mi * g3 / (9.0 * w0)) + &o.a * (mi * g3 / (2.0 * wd - w0) * pib * pib),
        4 => o.ad.dot(&o.ad) * (mi * g3 / (2.0 * w0 + wd) * pib),
        5 => &o.ad * (mi * g3 / (w0 + 2.0 * wd) * pib * pib),
        _ => &o.one * (mi * g3 / (9.0 * wd) * pib * pib * pib),
    })
}

/// `<phi_mu^d| p~_n |phi_nu^d>` with its frame phase `theta_{mu nu}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixElement {
    pub value: C64,
    /// `eps_nu - eps_mu + eps_mu^d - eps_nu^d` with lab values from `fold_to_lab`.
    pub theta: f64,
    pub n: i32,
}

fn theta(h: &EffectiveHamiltonian, mu: usize, nu: usize) -> f64 {
    let lab = h.lab_quasienergies();
    lab[nu] - lab[mu] + h.energies[mu] - h.energies[nu]
}

fn check_modes(h: &EffectiveHamiltonian, mu: usize, nu: usize) -> Result<()> {
    if mu.max(nu) >= h.dim() {
        return Err(Error::Dimension(format!("mode {} outside the {}-state truncation", mu.max(nu), h.dim())));
    }
    Ok(())
}

pub fn analytic_matrix_elements(h: &EffectiveHamiltonian, mu: usize, nu: usize, n: i32) -> Result<MatrixElement> {
    check_modes(h, mu, nu)?;
    let p = p_tilde(&h.params, n, h.dim())?;
    let v = p.dot(&h.states.column(nu));
    let value = h.states.column(mu).iter().zip(v.iter()).map(|(a, b)| a.conj() * b).sum();
    Ok(MatrixElement { value, theta: theta(h, mu, nu), n })
}

/// `X_{mu nu k}`: the `p~_n` element whose phase `theta + n omega_d / 2`
/// matches harmonic `k`, i.e. `n = 2k - 2 theta / omega_d`.
pub fn floquet_matrix_element(h: &EffectiveHamiltonian, mu: usize, nu: usize, k: i32) -> Result<MatrixElement> {
    check_modes(h, mu, nu)?;
    let half = 0.5 * h.params.omega_d;
    let th = theta(h, mu, nu);
    let m = (th / half).round();
    if (th - m * half).abs() > 1e-6 * half {
        return invalid(format!("theta = {th} is not a multiple of omega_d / 2"));
    }
    analytic_matrix_elements(h, mu, nu, 2 * k - m as i32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::floquet::DriveSpec;
    use crate::linalg::max_abs;
    use crate::perturbation::{displaced_frame_params, effective_hamiltonian, resonant_drive_frequency, OscillatorParams};
    use ndarray::s;

    fn toy() -> DisplacedFrameParams {
        let osc = OscillatorParams { omega_0: 6.0, g3: -0.03, g4: -0.0006, phi_zpf: 0.27 };
        let mut drive = DriveSpec::new(0.9, 12.05);
        drive.phase = 0.4;
        displaced_frame_params(&osc, &drive).unwrap()
    }

    fn block(m: &Array2<C64>, k: usize) -> Array2<C64> {
        m.slice(s![..k, ..k]).to_owned()
    }

    #[test]
    fn generator_cancels_first_order_replicas() {
        // G_n = -i sum_j h_j / (dn_j (omega_0 - omega_d/2) + n omega_d / 2) over the
        // monomials h_j of H_n^(1), each changing photon number by dn_j.
        let p = toy();
        let (w0, wd, g3) = (p.osc.omega_0, p.omega_d, p.osc.g3);
        let pib = p.pi.conj();
        let pi2 = p.pi.norm_sqr();
        let dim = 12;
        let o = Ops::new(dim);
        let den = |dn: f64, n: f64| dn * (w0 - 0.5 * wd) + 0.5 * n * wd;
        let terms: Vec<(i32, Vec<(Array2<C64>, f64)>)> = vec![
            (1, vec![(o.ad.dot(&o.ad).dot(&o.a) * c(g3), 1.0), (&o.ad * c(g3 * (1.0 + 2.0 * pi2)), 1.0)]),
            (2, vec![((o.num() * c(2.0) + &o.one * c(1.0 + pi2)) * (pib * g3), 0.0)]),
            (3, vec![(o.ad.dot(&o.ad).dot(&o.ad) * c(g3 / 3.0), 3.0), (&o.a * (pib * pib * g3), -1.0)]),
            (4, vec![(o.ad.dot(&o.ad) * (pib * g3), 2.0)]),
            (5, vec![(&o.ad * (pib * pib * g3), 1.0)]),
            (6, vec![(&o.one * (pib * pib * pib * (g3 / 3.0)), 0.0)]),
        ];
        for (n, hs) in terms {
            let want = hs.iter().fold(Array2::<C64>::zeros((dim, dim)), |acc, (h, dn)| acc + h * (-I / den(*dn, n as f64)));
            let got = generator_first_order(&p, n, dim).unwrap();
            assert!(max_abs(&(got - want)) < 1e-12, "G_{n}");
        }
    }

    #[test]
    fn a_tilde_matches_generator_commutators() {
        // a~_m = i [G_{m+1}, a] + beta_m + delta_{m,-1} a.
        let p = toy();
        let dim = 16;
        let k = dim - 4;
        let o = Ops::new(dim);
        let (w0, wd) = (p.osc.omega_0, p.omega_d);
        for m in -4..=4 {
            let g = generator_first_order(&p, m + 1, dim).unwrap();
            let mut want = (g.dot(&o.a) - o.a.dot(&g)) * I;
            if m == -1 {
                want = want + &o.a;
            }
            if m == -2 {
                want = want + &o.one * (p.pi * ((wd + w0) / (2.0 * wd)));
            }
            if m == 2 {
                want = want + &o.one * (p.pi.conj() * ((wd - w0) / (2.0 * wd)));
            }
            let got = a_tilde(&p, m, dim).unwrap();
            assert!(max_abs(&(block(&got, k) - block(&want, k))) < 1e-12, "a~_{m}");
        }
    }

    #[test]
    fn p_tilde_closed_forms() {
        let p = toy();
        let (w0, wd, g3) = (p.osc.omega_0, p.omega_d, p.osc.g3);
        let pib = p.pi.conj();
        let dim = 10;
        let o = Ops::new(dim);
        assert!(max_abs(&p_tilde(&p, 0, dim).unwrap()) == 0.0);
        let p1 = &o.ad * I + &o.a * (I * 2.0 * g3 / wd * pib);
        let p2 = &o.one * (I * w0 / wd * pib) + o.ad.dot(&o.ad) * (I * 4.0 * g3 / (3.0 * w0));
        let p3 = &o.ad * (I * 4.0 * g3 * (w0 + wd) / (wd * (2.0 * w0 + wd)) * pib);
        for (n, want) in [(1, p1), (2, p2), (3, p3)] {
            assert!(max_abs(&(p_tilde(&p, n, dim).unwrap() - want)) < 1e-12, "p~_{n}");
        }
        for n in 1..=4 {
            let d = dagger(&p_tilde(&p, n, dim).unwrap()) - p_tilde(&p, -n, dim).unwrap();
            assert!(max_abs(&d) < 1e-14);
        }
        assert!(p_tilde(&p, 5, dim).is_err());
    }

    #[test]
    fn cat_matrix_element_identities() {
        // Deep in the cat regime with vanishing detuning.
        let osc = OscillatorParams { omega_0: 6.0, g3: -0.024, g4: -0.0006, phi_zpf: 0.27 };
        let w = resonant_drive_frequency(&osc, 2.4).unwrap();
        let h = effective_hamiltonian(&osc, &DriveSpec::new(2.4, w), 60).unwrap();
        let alpha2 = h.params.eps2.norm() / h.params.kerr;
        assert!(alpha2 > 8.0, "|alpha|^2 = {alpha2}");
        let x010 = floquet_matrix_element(&h, 0, 1, 0).unwrap();
        let x101 = floquet_matrix_element(&h, 1, 0, 1).unwrap();
        assert_eq!((x010.n, x101.n), (1, 1));
        assert!((x010.theta + 0.5 * w).abs() < 1e-9 * w);
        assert!((x010.value - x101.value).norm() < 1e-3 * x010.value.norm());
        let x210 = floquet_matrix_element(&h, 2, 1, 0).unwrap();
        assert_eq!(x210.n, 1);
        assert!((x210.value - I).norm() < 0.2, "X_210 = {}", x210.value);
        let x201 = floquet_matrix_element(&h, 2, 0, 1).unwrap();
        let want = 8.0 * osc.g3.abs() * alpha2.sqrt() / (3.0 * osc.omega_0);
        assert!((x201.value.norm() / want - 1.0).abs() < 0.3, "|X_201| = {} vs {want}", x201.value.norm());
    }
}
