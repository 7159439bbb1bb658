//! The double-SNAIL potential, its minimum and its Taylor coefficients.

use serde::{Deserialize, Serialize};

use super::CircuitSpec;
use crate::error::{Error, Result};

/// One term `-amp * E_J * cos(freq * phi + phase)` of the potential.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CosTerm {
    pub amp: f64,
    pub freq: f64,
    pub phase: f64,
}

impl CosTerm {
    /// `d^n/dphi^n` of `-amp * cos(freq * phi + phase)`.
    pub fn derivative(&self, phi: f64, n: usize) -> f64 {
        let x = self.freq * phi + self.phase;
        // d^n cos(x)/dx^n = cos(x + n pi/2)
        -self.amp * self.freq.powi(n as i32) * (x + n as f64 * std::f64::consts::FRAC_PI_2).cos()
    }
}

/// Cosine terms of `U(phi) / E_J`: `n_large` large junctions split over two
/// SNAILs plus one small junction of relative size `alpha` in each.
pub fn cos_terms(spec: &CircuitSpec) -> Vec<CosTerm> {
    let n = spec.n_large_junctions as f64;
    vec![
        CosTerm { amp: n, freq: 1.0 / n, phase: 0.0 },
        CosTerm { amp: 2.0 * spec.alpha, freq: 0.5, phase: spec.phi_ext },
    ]
}

/// `d^n u / dphi^n` of the scaled potential `u = U / E_J`.
pub fn scaled_derivative(terms: &[CosTerm], phi: f64, n: usize) -> f64 {
    terms.iter().map(|t| t.derivative(phi, n)).sum()
}

/// Locates the potential minimum closest to zero by a bracketed,
/// bisection-safeguarded Newton search on `u'(phi) = 0`.
pub fn find_minimum(terms: &[CosTerm], tol: f64) -> Result<f64> {
    let du = |p: f64| scaled_derivative(terms, p, 1);
    let d2u = |p: f64| scaled_derivative(terms, p, 2);
    let mut half = std::f64::consts::PI;
    let (mut lo, mut hi) = (-half, half);
    while !(du(lo) < 0.0 && du(hi) > 0.0) {
        half *= 1.5;
        if half > 1e3 {
            return Err(Error::NotConverged {
                what: "potential minimizer",
                detail: "no sign change of dU/dphi bracketing zero".into(),
            });
        }
        lo = -half;
        hi = half;
    }
    let mut x = 0.0f64.clamp(lo, hi);
    for _ in 0..200 {
        let f = du(x);
        if f < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let c = d2u(x);
        let newton = if c > 0.0 { x - f / c } else { f64::NAN };
        let next = if newton.is_finite() && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if (next - x).abs() < tol || hi - lo < tol {
            let x = next;
            if d2u(x) <= 0.0 {
                return Err(Error::NotConverged {
                    what: "potential minimizer",
                    detail: format!("stationary point at {x} is not a minimum"),
                });
            }
            return Ok(x);
        }
        x = next;
    }
    Err(Error::NotConverged { what: "potential minimizer", detail: format!("last iterate {x}") })
}

/// Expansion of the potential about its minimum.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TaylorCoefficients {
    pub phi_min: f64,
    /// `c[n] = u^(n)(phi_min)` for `n = 0..=order`.
    pub c: Vec<f64>,
    pub omega_0: f64,
    pub phi_zpf: f64,
    pub n_zpf: f64,
    /// `g[n] = E_J c_n phi_zpf^n / (n-1)!`, populated for `n >= 3`.
    pub g: Vec<f64>,
}

impl TaylorCoefficients {
    pub fn g3(&self) -> f64 {
        self.g[3]
    }

    pub fn g4(&self) -> f64 {
        self.g[4]
    }
}

/// Harmonic frame of a mode with charging energy `e_c` and curvature `e_j_c2`.
pub fn harmonic_frame(e_c: f64, e_j_c2: f64) -> (f64, f64) {
    let omega = (8.0 * e_c * e_j_c2).sqrt();
    let phi_zpf = (2.0 * e_c / e_j_c2).powf(0.25);
    (omega, phi_zpf)
}

pub fn taylor_coefficients(spec: &CircuitSpec, order: usize) -> Result<TaylorCoefficients> {
    if order < 3 {
        return Err(Error::InvalidInput(format!("taylor order must be >= 3, got {order}")));
    }
    spec.validate()?;
    let terms = cos_terms(spec);
    let phi_min = find_minimum(&terms, 1e-13)?;
    let c: Vec<f64> = (0..=order).map(|n| scaled_derivative(&terms, phi_min, n)).collect();
    if c[2] <= 0.0 {
        return Err(Error::InvalidInput("non-positive curvature at the potential minimum".into()));
    }
    let (omega_0, phi_zpf) = harmonic_frame(spec.e_c, spec.e_j * c[2]);
    let mut g = vec![0.0; order + 1];
    let mut fact = 2.0; // (n-1)! for n = 3
    for n in 3..=order {
        g[n] = spec.e_j * c[n] * phi_zpf.powi(n as i32) / fact;
        fact *= n as f64;
    }
    Ok(TaylorCoefficients { phi_min, c, omega_0, phi_zpf, n_zpf: 0.5 / phi_zpf, g })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::CircuitSpec;
    use crate::units::{ghz, mhz, to_hz};

    #[test]
    fn fig1_frame() {
        let t = taylor_coefficients(&CircuitSpec::fig1(), 6).unwrap();
        assert!((t.phi_min - (-0.256983)).abs() < 1e-5, "phi_min = {}", t.phi_min);
        assert!((t.c[2] - 0.158107).abs() < 1e-5);
        assert!((to_hz(t.omega_0) / 1e9 - 6.094847).abs() < 1e-5);
        assert!((t.phi_zpf - 0.265986).abs() < 1e-5);
        assert!((to_hz(t.g3()) / 1e6 - (-24.39)).abs() < 0.01);
        assert!((to_hz(t.g4()) / 1e6 - (-0.5736)).abs() < 0.001);
        assert!(scaled_derivative(&cos_terms(&CircuitSpec::fig1()), t.phi_min, 1).abs() < 1e-14);
    }

    #[test]
    fn symmetric_potential_has_no_odd_terms() {
        let mut spec = CircuitSpec::fig1();
        spec.alpha = 1e-9;
        spec.phi_ext = 0.0;
        let t = taylor_coefficients(&spec, 7).unwrap();
        assert!(t.phi_min.abs() < 1e-12);
        for n in [3, 5, 7] {
            assert!(t.c[n].abs() < 1e-14);
        }
        let _ = (ghz(1.0), mhz(1.0));
    }

    #[test]
    fn derivatives_match_finite_differences() {
        // Independent oracle: central differences of the closed-form potential.
        let spec = CircuitSpec::fig1();
        let u = |p: f64| -6.0 * (p / 6.0).cos() - 2.0 * spec.alpha * (p / 2.0 + spec.phi_ext).cos();
        let t = taylor_coefficients(&spec, 4).unwrap();
        let p = t.phi_min;
        let h = 1e-2;
        let d3 = (u(p + 2.0 * h) - 2.0 * u(p + h) + 2.0 * u(p - h) - u(p - 2.0 * h)) / (2.0 * h.powi(3));
        let d4 = (u(p + 2.0 * h) - 4.0 * u(p + h) + 6.0 * u(p) - 4.0 * u(p - h) + u(p - 2.0 * h)) / h.powi(4);
        assert!((d3 - t.c[3]).abs() < 1e-5 * t.c[3].abs());
        assert!((d4 - t.c[4]).abs() < 1e-4 * t.c[4].abs());
    }
}
