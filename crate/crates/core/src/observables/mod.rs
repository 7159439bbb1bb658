//! Phase-space functions and the figures of merit of the Kerr-cat qubit.
//!
//! Density matrices from the master equation live in the Floquet basis
//! (interaction picture). Phase-space quantities map them to SNAIL Fock
//! states through the Floquet modes at `t = 0` and the dressed states,
//! tracing out any secondary mode.

mod phase_space;
mod probe;
mod tunneling;
mod wells;

pub use phase_space::{coherent_state, husimi_fock, to_snail_fock, wigner_fock, HusimiProjector, PhaseGrid};
pub use probe::{probe_integral, probe_transition_amplitude};
pub use tunneling::{
    assignment_error_series, coherence_time_tz, leakage_probability, log_time_grid, AssignmentErrorResult, LeakageSeries,
    TzResult,
};
pub use wells::{pair_wells, well_states, PairWells, WellStates};
