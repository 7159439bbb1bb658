//! Capacitance network of the double-SNAIL array and its collective modes.
//!
//! The six junction fluxes are rotated to the symmetric mode `phi`, the
//! antisymmetric array mode `phi_-`, and four transverse modes
//! `xi_1, xi_2, chi_1, chi_2`. Capacitances are in arbitrary common units.

use ndarray::{Array1, Array2};
use serde::{Deserialize, Serialize};

use super::potential::taylor_coefficients;
use super::CircuitSpec;
use crate::error::{invalid, Result};
use crate::linalg::inverse_real;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CapacitanceInputs {
    /// Large-junction capacitance `C_J^a`.
    pub c_j: f64,
    /// Small-junction capacitance `alpha C_J^a`.
    pub c_j_small: f64,
    pub c_s: f64,
    pub c_v: f64,
    pub c_g_a: f64,
    pub c_g_m: f64,
    pub c_g_t: f64,
}

impl CapacitanceInputs {
    /// Network with all ground capacitances equal to `cg` and shunt `cs`,
    /// both relative to `C_J^a = 1`.
    pub fn uniform(alpha: f64, shunt: f64, cg: f64) -> Self {
        CapacitanceInputs { c_j: 1.0, c_j_small: alpha, c_s: shunt, c_v: 0.0, c_g_a: cg, c_g_m: cg, c_g_t: cg }
    }
}

/// Mode order in all arrays: `[phi, phi_-, xi_1, xi_2, chi_1, chi_2]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CapacitanceNetwork {
    /// Charging energies relative to the symmetric mode's `E_C`.
    pub e_c: [f64; 6],
    /// `beta = C^-1_{--} / C^-1_{phi phi}`.
    pub beta: f64,
    /// Transverse-mode capacitance ratios `C^-1_{xx} / C^-1_{phi phi}`.
    pub beta_mu: [f64; 4],
    /// Charge couplings to the symmetric mode for `[phi_-, xi_1, xi_2, chi_1, chi_2]`.
    pub couplings: [f64; 5],
    /// Couplings rescaled so that the array-mode coupling equals the requested value.
    pub couplings_normalized: Option<[f64; 5]>,
    /// Plasma frequencies `sqrt(8 E_C,x E_J,x)`.
    pub plasma: [f64; 6],
}

/// Rows of the semiorthogonal transverse transform.
const W: [[f64; 3]; 2] = [
    [std::f64::consts::FRAC_1_SQRT_2, 0.0, -std::f64::consts::FRAC_1_SQRT_2],
    [0.408_248_290_463_863, -0.816_496_580_927_726, 0.408_248_290_463_863],
];

fn kinetic_matrix(c: &CapacitanceInputs) -> Array2<f64> {
    let mut k = Array2::<f64>::eye(6) * c.c_j;
    k += c.c_s + c.c_v;
    for block in [0..3, 3..6] {
        for i in block.clone() {
            for j in block.clone() {
                k[[i, j]] += c.c_j_small;
            }
        }
    }
    // Ground capacitances accumulate along the array.
    let r = [0.0, 0.0, 2.0 * c.c_g_a, 2.0 * c.c_g_a + c.c_g_m, 3.0 * c.c_g_a + c.c_g_m, 4.0 * c.c_g_a + c.c_g_m];
    for i in 0..6 {
        for j in 0..6 {
            k[[i, j]] += c.c_g_t + r[i.min(j)];
        }
    }
    k
}

fn collective_transform() -> Array2<f64> {
    let mut m = Array2::<f64>::zeros((6, 6));
    for i in 0..3 {
        m[[i, 0]] = 1.0 / 6.0;
        m[[i, 1]] = 1.0 / 6.0;
        m[[i, 2]] = W[0][i];
        m[[i, 3]] = W[1][i];
        m[[i + 3, 0]] = 1.0 / 6.0;
        m[[i + 3, 1]] = -1.0 / 6.0;
        m[[i + 3, 4]] = W[0][i];
        m[[i + 3, 5]] = W[1][i];
    }
    m
}

/// Collective-mode charging energies, couplings and plasma frequencies.
///
/// `g_minus_target` rescales the couplings so the array-mode coupling takes
/// that value.
pub fn capacitance_network(
    spec: &CircuitSpec,
    caps: &CapacitanceInputs,
    g_minus_target: Option<f64>,
) -> Result<CapacitanceNetwork> {
    let vals = [caps.c_j_small, caps.c_s, caps.c_v, caps.c_g_a, caps.c_g_m, caps.c_g_t];
    if !(caps.c_j > 0.0) || vals.iter().any(|&x| !(x >= 0.0)) {
        return invalid("capacitances must be >= 0 with C_J^a > 0");
    }
    let m = collective_transform();
    let cq = m.t().dot(&kinetic_matrix(caps)).dot(&m);
    let ci = inverse_real(&cq)?;
    if ci.iter().any(|x| !x.is_finite()) || ci[[0, 0]] <= 0.0 {
        return Err(crate::error::Error::Singular("capacitance matrix"));
    }
    let tay = taylor_coefficients(spec, 4)?;
    let c2 = tay.c[2];
    let transverse = (tay.phi_min / spec.n_large_junctions as f64).cos();
    let ej = Array1::from(vec![c2, c2, transverse, transverse, transverse, transverse]) * spec.e_j;
    let c00 = ci[[0, 0]];
    let mut e_c = [0.0; 6];
    let mut plasma = [0.0; 6];
    for x in 0..6 {
        e_c[x] = ci[[x, x]] / c00;
        plasma[x] = (8.0 * spec.e_c * e_c[x] * ej[x]).sqrt();
    }
    let mut couplings = [0.0; 5];
    for x in 1..6 {
        couplings[x - 1] = 8.0 * spec.e_c * ci[[0, x]] / c00;
    }
    let couplings_normalized = match g_minus_target {
        Some(g) if couplings[0].abs() > 0.0 => Some(couplings.map(|c| c * g / couplings[0])),
        _ => None,
    };
    Ok(CapacitanceNetwork {
        e_c,
        beta: e_c[1],
        beta_mu: [e_c[2], e_c[3], e_c[4], e_c[5]],
        couplings,
        couplings_normalized,
        plasma,
    })
}
