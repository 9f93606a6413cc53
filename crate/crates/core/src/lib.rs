//! Couplings of Brownian motions on the Heisenberg groups ℍₙ.
//!
//! - [`group`]: group law, dilations, rotations, quasidistance.
//! - [`coupling`]: coupling matrices, moving frame, named strategies.
//! - [`sim`]: full, reduced and exact-reflection simulators.
//! - [`static_coupling`]: fixed-time coupling built from Brownian bridges.
//! - [`estimators`]: moments, fits, assignment, closed-form constants.

pub mod coupling;
pub mod estimators;
pub mod group;
pub mod io;
pub mod rng;
pub mod sim;
pub mod static_coupling;
pub mod tolerances;

pub use group::{quasi_distance, vertical_cc, Dilation, HeisPoint};
