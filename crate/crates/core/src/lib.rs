//! Single-photon quantum weak coin flipping.
//!
//! * [`fock`]: exact density-matrix engine for beam splitters, phases,
//!   photon loss and threshold / number-resolving detection.
//! * [`protocol`]: honest protocol, closed form and circuit simulation.
//! * [`adversary`]: optimal cheating probabilities, optimal attacks, the
//!   brute-force eigenvalue oracle and the strong-coin-flip construction.
//! * [`solver`]: fair/balanced operating points, classical-advantage test
//!   and distance sweeps.
//! * [`verify`]: the property suite behind `wcf verify`.

pub mod error;
pub mod fock;
pub mod protocol;
pub mod adversary;
pub mod solver;
pub mod verify;

pub use error::{Error, Result};
