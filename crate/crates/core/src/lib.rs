//! Floquet-Markov simulation of the driven double-SNAIL Kerr-cat qubit.
//!
//! The crate is organized along the simulation pipeline:
//! [`circuit`] builds and diagonalizes the undriven circuit, [`floquet`]
//! computes and tracks Floquet modes under a drive, [`lindblad`] assembles
//! and evolves the partial-secular master equation, [`observables`] extracts
//! tunneling and coherence times, and [`perturbation`] provides the
//! Schrieffer-Wolff cross-check.

extern crate blas_src;
extern crate openblas_src;

pub mod analysis;
pub mod circuit;
pub mod error;
pub mod fit;
pub mod floquet;
pub mod lindblad;
pub mod linalg;
pub mod observables;
pub mod perturbation;
pub mod units;

pub use error::{Error, Result};
pub use linalg::C64;
