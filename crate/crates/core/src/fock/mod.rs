//! Density-matrix simulation of few-mode passive linear optics.
//!
//! States live on a [`FockBasis`] truncated at a global photon-number cap.
//! Beam splitters and phases conserve photon number and loss only removes
//! photons, so nothing leaks out of the truncated space when the input
//! respects the cap.

mod basis;
mod detector;
mod optics;
mod state;

pub use basis::{ket_label, FockBasis};
pub use detector::{
    condition, outcome_probability, pattern_operator, pattern_weights, povm_no_click, Conditioned,
    DetectorKind, DetectorModel, ModeOutcome,
};
pub use optics::{
    apply_beamsplitter, apply_loss, apply_phase, loss_kraus_operators, prepare_fock, two_mode_unitary,
    BeamSplitterSpec,
};
pub use state::{Operator, QuantumState, Tolerances, C64};

/// Default global photon-number cap.
pub const DEFAULT_TRUNCATION: usize = 6;

pub(crate) fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

pub(crate) fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}
