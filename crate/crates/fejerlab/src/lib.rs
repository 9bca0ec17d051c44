//! Numerical laboratory for Fejér* monotone sequences.
//!
//! Builds the step halfspaces of a sequence, decides membership in their
//! limit inferior, generates a zoo of worked example sequences, classifies
//! monotonicity (Fejér, Fejér*, Opial, quasi-Fejér types) and studies the
//! directional asymptotics of the iterates.

pub mod asymptotics;
pub mod config;
pub mod engine;
pub mod error;
pub mod hilbert;
pub mod lab;
pub mod sets;
pub mod verify;
pub mod zoo;

pub use config::LabConfig;
pub use error::{LabError, Result};
pub use hilbert::{Vector, ZERO_TOL};
