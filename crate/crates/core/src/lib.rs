//! Exact two-qubit entanglement and purity dynamics in the spectator
//! configuration: one qubit couples to a bosonic environment while its
//! partner stays isolated.
//!
//! Three interactions are covered:
//!
//! - Tavis-Cummings (single cavity mode, resonant, `g_B = 0`),
//! - Buck-Sukumar (intensity-dependent coupling),
//! - pure-dephasing spin-boson with `M` independent oscillators.
//!
//! The crate is layered bottom-up: [`qmath`] is the dense complex kernel,
//! [`states`] builds initial states, [`models`] evolves them, [`measures`]
//! turns reduced states into purity and concurrence, [`cpdiagram`] places
//! them in the concurrence-purity plane, and [`ensemble`] averages the
//! spin-boson concurrence over random environments.
//!
//! Two-qubit states always use the basis order `{ee, eg, ge, gg}` and
//! composite states order their factors as qubit A, qubit B, field.

pub mod cpdiagram;
pub mod ensemble;
mod error;
pub mod measures;
pub mod models;
pub mod qmath;
pub mod states;

pub use error::{Error, Result};
pub use num_complex::Complex64;
