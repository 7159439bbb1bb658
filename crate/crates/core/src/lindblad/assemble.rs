//! One dissipator per quasidegeneracy class and bath channel.

use ndarray::Array2;

use super::bath::{kappa, BathSpec};
use super::transitions::TransitionTable;
use crate::error::{invalid, Result};
use crate::linalg::{dagger, C64};

/// `rate * D[sum X |mu><nu|]` in the Floquet basis.
#[derive(Clone, Debug, PartialEq)]
pub struct JumpOperator {
    pub channel: usize,
    pub class: usize,
    /// Representative transition frequency of the class.
    pub delta: f64,
    pub rate: f64,
    /// `(mu, nu, X)` entries of the operator.
    pub terms: Vec<(usize, usize, C64)>,
}

impl JumpOperator {
    pub fn matrix(&self, dim: usize) -> Array2<C64> {
        let mut m = Array2::zeros((dim, dim));
        for &(a, b, x) in &self.terms {
            m[[a, b]] += x;
        }
        m
    }
}

/// Partial-secular Lindbladian over the first `dim` Floquet modes.
#[derive(Clone, Debug, PartialEq)]
pub struct LindbladianRep {
    pub dim: usize,
    pub jumps: Vec<JumpOperator>,
}

impl LindbladianRep {
    pub fn zero(dim: usize) -> Self {
        LindbladianRep { dim, jumps: vec![] }
    }

    /// Applies the generator to a dense density matrix.
    pub fn apply(&self, rho: &Array2<C64>) -> Array2<C64> {
        let mut out = Array2::zeros(rho.dim());
        for j in &self.jumps {
            let l = j.matrix(self.dim);
            let ld = dagger(&l);
            let ldl = ld.dot(&l);
            let term = l.dot(rho).dot(&ld) - (ldl.dot(rho) + rho.dot(&ldl)) * C64::new(0.5, 0.0);
            out.scaled_add(C64::new(j.rate, 0.0), &term);
        }
        out
    }

    /// `sum rate L^dag L`, the decay part of the effective Hamiltonian.
    pub fn decay_matrix(&self) -> Array2<C64> {
        let mut g = Array2::<C64>::zeros((self.dim, self.dim));
        for j in &self.jumps {
            for &(a, b, x) in &j.terms {
                for &(c, d, y) in &j.terms {
                    if a == c {
                        g[[b, d]] += x.conj() * y * j.rate;
                    }
                }
            }
        }
        g
    }
}

/// Evaluates `kappa` at each class representative (the member with the
/// largest summed amplitude) and builds the class jump operators. Lamb
/// shifts are dropped; zero-rate dissipators are omitted.
pub fn assemble(table: &TransitionTable, baths: &BathSpec, dim: usize) -> Result<LindbladianRep> {
    baths.validate()?;
    if table.entries.iter().any(|t| t.x.len() != baths.channels.len()) {
        return invalid("transition table and bath disagree on the number of channels");
    }
    if table.entries.iter().any(|t| t.mu >= dim || t.nu >= dim) {
        return invalid(format!("transition table references modes beyond dimension {dim}"));
    }
    let mut jumps = vec![];
    for (ci, class) in table.classes.iter().enumerate() {
        let rep = *class
            .iter()
            .max_by(|&&a, &&b| table.entries[a].weight().total_cmp(&table.entries[b].weight()).then(b.cmp(&a)))
            .expect("classes are non-empty");
        let delta = table.entries[rep].delta;
        for (c, channel) in baths.channels.iter().enumerate() {
            let rate = kappa(delta, channel, table.omega_d)?;
            assert!(rate >= 0.0, "negative rate {rate} at delta {delta}");
            if rate == 0.0 {
                continue;
            }
            let terms: Vec<(usize, usize, C64)> = class
                .iter()
                .map(|&e| &table.entries[e])
                .filter(|t| t.x[c] != C64::new(0.0, 0.0))
                .map(|t| (t.mu, t.nu, t.x[c]))
                .collect();
            if !terms.is_empty() {
                jumps.push(JumpOperator { channel: c, class: ci, delta, rate, terms });
            }
        }
    }
    Ok(LindbladianRep { dim, jumps })
}
