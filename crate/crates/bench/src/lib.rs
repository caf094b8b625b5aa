//! Fixed inputs shared by the criterion benches.

use wcf_core::protocol::{LossBudget, ProtocolParams};

/// Balanced lossless operating point, `x = 1 - 1/sqrt(2)`.
pub fn balanced_params() -> ProtocolParams {
    ProtocolParams::fair_lossless(1.0 - std::f64::consts::FRAC_1_SQRT_2).expect("x in fair range")
}

/// A lossy budget in the regime of the distance sweeps.
pub fn lossy_budget() -> LossBudget {
    LossBudget::new(0.977, 0.95, 0.95, 0.95, 0.95, 0.0).expect("valid budget")
}
