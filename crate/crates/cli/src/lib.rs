//! Batch sweeps of drive amplitude for the kerrcat simulation library.
//!
//! A [`RunConfig`] (TOML, frequencies in Hz) describes the circuit, the
//! truncation, the bath and the amplitude grid. [`run`] tracks Floquet
//! branches sequentially, analyzes each amplitude on a worker pool, and
//! returns a [`SweepResult`] with one row per amplitude.

pub mod config;
pub mod describe;
pub mod presets;
pub mod result;
pub mod run;

pub use config::{ConfigError, RunConfig};
pub use describe::{summarize, Summary};
pub use presets::{preset, PRESETS};
pub use result::{Format, Row, RowStatus, SweepResult};
pub use run::{run, RunError, RunOptions};
