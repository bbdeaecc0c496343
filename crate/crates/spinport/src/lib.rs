//! Simulator for a post-selected proton spin-state teleportation experiment.
//!
//! The library has two halves. The quantum half ([`quantum`]) is an exact
//! density-operator engine for one to three spin-1/2 particles: singlet and
//! Werner channel construction, spin and Bell-basis measurements, CHSH
//! correlation sums, and post-selected teleportation. The experiment half
//! models the beamline around it: relativistic two-body elastic kinematics
//! ([`kinematics`]), a seeded Monte Carlo event generator with timestamped
//! detector hits ([`sim`]), and stream-level analysis with coincidence
//! building, left/right polarimetry, and a causal-separation test
//! ([`analysis`]). [`config`] and [`event_file`] define the run-configuration
//! and event-file formats used by the command-line binary.

pub mod analysis;
pub mod cmatrix;
pub mod config;
pub mod event_file;
pub mod kinematics;
pub mod quantum;
pub mod report;
pub mod sim;
pub mod vec3;

pub use vec3::Vec3;

/// Speed of light in vacuum, m/s (exact by definition).
pub const SPEED_OF_LIGHT_M_PER_S: f64 = 299_792_458.0;

/// Proton rest mass, MeV/c^2.
pub const PROTON_MASS_MEV: f64 = 938.272;
