//! Sparse Liouvillian split into independent blocks.
//!
//! Dissipators only link density-matrix entries connected by their jump
//! operators, so the superoperator falls apart into many small blocks
//! (most coherences decay on their own). Each block is diagonalized densely.

use ndarray::{Array1, Array2};

use super::assemble::LindbladianRep;
use crate::error::{Error, Result};
use crate::linalg::{eig, inverse, max_abs, C64};

/// Largest block diagonalized densely.
const MAX_BLOCK: usize = 8000;

/// Connected component of the Liouvillian.
#[derive(Clone, Debug)]
pub struct Block {
    /// Vectorized indices `a * dim + b` of `rho[[a, b]]`.
    pub indices: Vec<usize>,
    pub matrix: Array2<C64>,
    pub eigenvalues: Array1<C64>,
    /// Right eigenvectors and their inverse when the block is diagonalizable
    /// to working accuracy.
    pub modes: Option<(Array2<C64>, Array2<C64>)>,
}

/// Block-diagonal superoperator acting on row-major vectorized `rho`.
#[derive(Clone, Debug)]
pub struct Liouvillian {
    pub dim: usize,
    pub blocks: Vec<Block>,
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// The generator is trace preserving, so every mode outside the kernel is
/// traceless. Rounding in `eig` breaks this at the level of the eigenvector
/// condition number; restoring it keeps `tr rho(t)` constant along evolutions.
fn make_traceless(vals: &mut Array1<C64>, vecs: &mut Array2<C64>, diagonal: &[usize], scale: f64) {
    let trace = |v: ndarray::ArrayView1<C64>| -> C64 { diagonal.iter().map(|&p| v[p]).sum() };
    // The kernel mode carrying the most trace.
    let Some(k0) = (0..vals.len())
        .filter(|&k| vals[k].norm() <= 1e-8 * scale)
        .max_by(|&a, &b| trace(vecs.column(a)).norm().total_cmp(&trace(vecs.column(b)).norm()))
    else {
        return;
    };
    let t0 = trace(vecs.column(k0));
    if t0.norm() == 0.0 {
        return;
    }
    vals[k0] = C64::new(0.0, 0.0);
    let v0 = vecs.column(k0).to_owned();
    for k in 0..vals.len() {
        if k != k0 {
            let c = trace(vecs.column(k)) / t0;
            vecs.column_mut(k).scaled_add(-c, &v0);
        }
    }
}

impl Liouvillian {
    pub fn new(rep: &LindbladianRep) -> Result<Self> {
        let n = rep.dim;
        let idx = |a: usize, b: usize| a * n + b;
        let mut triplets: Vec<(usize, usize, C64)> = vec![];
        for j in &rep.jumps {
            let r = C64::new(j.rate, 0.0);
            for &(a, c, x) in &j.terms {
                for &(b, d, y) in &j.terms {
                    triplets.push((idx(a, b), idx(c, d), r * x * y.conj()));
                }
            }
        }
        let g = rep.decay_matrix();
        let half = C64::new(0.5, 0.0);
        for ((a, c), &v) in g.indexed_iter() {
            if v == C64::new(0.0, 0.0) {
                continue;
            }
            for b in 0..n {
                // -1/2 (G rho)_{ab} and -1/2 (rho G)_{ba}.
                triplets.push((idx(a, b), idx(c, b), -half * v));
                triplets.push((idx(b, c), idx(b, a), -half * v));
            }
        }
        triplets.sort_by_key(|t| (t.0, t.1));
        let mut merged: Vec<(usize, usize, C64)> = Vec::with_capacity(triplets.len());
        for t in triplets {
            match merged.last_mut() {
                Some(m) if m.0 == t.0 && m.1 == t.1 => m.2 += t.2,
                _ => merged.push(t),
            }
        }
        let nn = n * n;
        let mut parent: Vec<usize> = (0..nn).collect();
        for &(r, c, _) in &merged {
            let (a, b) = (find(&mut parent, r), find(&mut parent, c));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
        let mut members: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        for i in 0..nn {
            let root = find(&mut parent, i);
            members.entry(root).or_default().push(i);
        }
        let mut block_of = vec![(0usize, 0usize); nn];
        let groups: Vec<Vec<usize>> = members.into_values().collect();
        for (bi, g) in groups.iter().enumerate() {
            for (p, &i) in g.iter().enumerate() {
                block_of[i] = (bi, p);
            }
        }
        let mut mats: Vec<Array2<C64>> = groups.iter().map(|g| Array2::zeros((g.len(), g.len()))).collect();
        for &(r, c, v) in &merged {
            let (b, pr) = block_of[r];
            let (_, pc) = block_of[c];
            mats[b][[pr, pc]] += v;
        }
        let mut blocks = Vec::with_capacity(groups.len());
        for (indices, matrix) in groups.into_iter().zip(mats) {
            let m = indices.len();
            if m > MAX_BLOCK {
                return Err(Error::Dimension(format!(
                    "Liouvillian block of size {m} exceeds {MAX_BLOCK}; lower the level cut"
                )));
            }
            if m == 1 {
                let l = matrix[[0, 0]];
                blocks.push(Block {
                    indices,
                    eigenvalues: Array1::from(vec![l]),
                    modes: Some((Array2::eye(1), Array2::eye(1))),
                    matrix,
                });
                continue;
            }
            let (mut vals, vecs) = eig(&matrix, true)?;
            let mut vecs = vecs.expect("requested eigenvectors");
            let scale = max_abs(&matrix).max(f64::MIN_POSITIVE);
            let diagonal: Vec<usize> = indices.iter().enumerate().filter(|(_, &i)| i / n == i % n).map(|(p, _)| p).collect();
            if !diagonal.is_empty() {
                make_traceless(&mut vals, &mut vecs, &diagonal, scale);
            }
            let modes = match inverse(&vecs) {
                Ok(inv) => {
                    let recon = vecs.dot(&Array2::from_diag(&vals)).dot(&inv);
                    (max_abs(&(recon - &matrix)) < 1e-9 * scale).then_some((vecs, inv))
                }
                Err(_) => None,
            };
            if modes.is_none() {
                log::debug!("Liouvillian block of size {m} is not safely diagonalizable; using expm");
            }
            blocks.push(Block { indices, matrix, eigenvalues: vals, modes });
        }
        Ok(Liouvillian { dim: n, blocks })
    }

    pub fn eigenvalues(&self) -> Vec<C64> {
        self.blocks.iter().flat_map(|b| b.eigenvalues.iter().copied()).collect()
    }

    pub fn largest_block(&self) -> usize {
        self.blocks.iter().map(|b| b.indices.len()).max().unwrap_or(0)
    }

    /// Applies the superoperator to a dense density matrix.
    pub fn apply(&self, rho: &Array2<C64>) -> Array2<C64> {
        let n = self.dim;
        let flat: Vec<C64> = rho.iter().copied().collect();
        let mut out = vec![C64::new(0.0, 0.0); n * n];
        for b in &self.blocks {
            let x = Array1::from_iter(b.indices.iter().map(|&i| flat[i]));
            let y = b.matrix.dot(&x);
            for (&i, &v) in b.indices.iter().zip(y.iter()) {
                out[i] = v;
            }
        }
        Array2::from_shape_vec((n, n), out).expect("square")
    }
}
