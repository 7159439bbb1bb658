//! Partial-secular Floquet-Markov master equation.
//!
//! Transitions `nu -> mu` assisted by `k` drive photons have frequency
//! `Delta = eps_mu - eps_nu + k omega_d` and amplitude `X_{mu nu k}`, the
//! Fourier coefficient of the channel operator in the Floquet basis.
//! Quasidegenerate transitions are added coherently inside one dissipator.

mod assemble;
mod bath;
mod evolve;
mod superop;
mod transitions;

pub use assemble::{assemble, JumpOperator, LindbladianRep};
pub use bath::{kappa, BathSpec, Channel, ChannelOperator, FlatSpectrum, HarmonicValue};
pub use evolve::{evolve, liouvillian_gap, GapResult, Trajectory};
pub use superop::{Block, Liouvillian};
pub use transitions::{build_transition_table, fourier_matrix_elements, Transition, TransitionTable, XTensor};

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::circuit::SpectralData;
use crate::error::{invalid, Result};
use crate::floquet::FloquetPoint;
use crate::linalg::C64;

/// Truncation of the transition table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TableOptions {
    /// Largest drive-photon number `|k|` kept.
    pub k_max: usize,
    /// Modes `0..level_cut` enter the master equation (all when `None`).
    pub level_cut: Option<usize>,
    /// Transitions with every channel amplitude below this are dropped.
    pub element_floor: f64,
}

impl Default for TableOptions {
    fn default() -> Self {
        TableOptions { k_max: 6, level_cut: None, element_floor: 1e-8 }
    }
}

/// Everything derived from one Floquet point and a bath.
#[derive(Clone, Debug)]
pub struct PointDissipation {
    pub x: Vec<XTensor>,
    pub table: TransitionTable,
    pub rep: LindbladianRep,
}

/// Builds the Lindbladian of `point` from dressed-basis channel operators
/// (one per bath channel, in order).
pub fn dissipation_from_operators(
    point: &FloquetPoint,
    ops: &[Array2<C64>],
    bath: &BathSpec,
    opts: &TableOptions,
) -> Result<PointDissipation> {
    bath.validate()?;
    if ops.len() != bath.channels.len() {
        return invalid(format!("{} channel operators for {} channels", ops.len(), bath.channels.len()));
    }
    if point.mode_samples.is_empty() {
        return invalid("the Floquet point carries no micromotion samples");
    }
    let x = ops.iter().map(|op| fourier_matrix_elements(&point.mode_samples, op, opts.k_max)).collect::<Result<Vec<_>>>()?;
    let table = build_transition_table(point, &x, opts.level_cut, opts.element_floor, bath.quasideg_threshold)?;
    let dim = opts.level_cut.unwrap_or(point.quasienergies.len()).min(point.quasienergies.len());
    let rep = assemble(&table, bath, dim)?;
    Ok(PointDissipation { x, table, rep })
}

/// [`dissipation_from_operators`] with the operators named by the bath channels.
pub fn dissipation(point: &FloquetPoint, sd: &SpectralData, bath: &BathSpec, opts: &TableOptions) -> Result<PointDissipation> {
    let ops = bath.channels.iter().map(|c| c.operator.matrix(sd)).collect::<Result<Vec<_>>>()?;
    dissipation_from_operators(point, &ops, bath, opts)
}
