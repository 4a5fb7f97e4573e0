//! Simulator for one-dimensional topological discrete-time quantum walks.
//!
//! The crate covers the standard, split-step and double split-step walks on
//! a coin (x) position space, with
//!
//! - fast in-place stepping and explicit dense step operators ([`walk`]),
//! - chiral and particle-hole checks ([`symmetry`]),
//! - pure and mixed states, noise channels and the coin partial transpose
//!   ([`state`]),
//! - coin-position negativity ([`entanglement`]),
//! - Bloch bands, gap maps and interface edge modes ([`spectral`]),
//! - sweep drivers and file output used by the `qwalk` binary
//!   ([`experiments`]).

pub mod entanglement;
pub mod error;
pub mod experiments;
pub mod linalg;
pub mod params;
pub mod spectral;
pub mod state;
pub mod symmetry;
pub mod walk;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
