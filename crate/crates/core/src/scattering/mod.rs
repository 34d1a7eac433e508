//! Scattering off the interferometer centre.
//!
//! Closed-form amplitudes, the 2x2 transfer matrix, a brute-force linear
//! solve of the lattice equations used as an oracle, the expansion around a
//! spectral singularity, and flux sweeps of the transmission phase.

mod amplitudes;
mod approx;
mod oracle;
mod phase;
mod transfer;

pub use amplitudes::{
    reduced_transmission_phase, scattering_amplitudes, scattering_amplitudes_with,
    shared_denominator, ScatteringAmplitudes, POLE_THRESHOLD,
};
pub use approx::{approx_amplitude, ApproxAmplitude, CriticalPoint, TrustRegion};
pub use oracle::oracle_amplitudes;
pub use phase::{
    max_phase_shift, max_phase_shift_with, phase_profile, phase_profile_with, wrap_phase,
    LapseEvent, LapseOptions, NodeEvent, PhaseProfile, DEFAULT_SHIFT_POINTS,
};
pub use transfer::{det_transfer, transfer_matrix, TransferMatrix, DEGENERATE_THRESHOLD};
