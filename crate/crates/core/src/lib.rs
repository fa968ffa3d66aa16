//! Simulation and exact computation for the κ-color firefly cellular
//! automaton on cycles and on segments of ℤ.

pub mod constants;
pub mod error;
pub mod exact;
pub mod harness;
pub mod lattice;
pub mod oracle;
pub mod particles;
pub mod rng;
pub mod stats;
pub mod walk;

pub use error::{Error, Result};
