//! Honest run of the single-photon weak coin flip.
//!
//! Mode 0 is the arm Alice keeps, mode 1 the arm she sends to Bob and mode 2
//! the output of Bob's first beam splitter that he measures to announce `c`.
//! Alice wins on Bob's verification pattern (click, no click) after the
//! `z` splitter when `c = 0`; Bob wins when `c = 1` and Alice's detector
//! stays dark.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{check_efficiency, check_unit, Error, Result};
use crate::fock::{
    apply_beamsplitter, apply_loss, condition, outcome_probability, prepare_fock, BeamSplitterSpec,
    DetectorKind, DetectorModel, FockBasis, ModeOutcome,
};

/// Beam-splitter reflectivities of the three splitters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProtocolParams {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl ProtocolParams {
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let p = Self { x, y, z };
        p.validate()?;
        Ok(p)
    }

    /// Fair, abort-free lossless family: `y = fair_y(x)`, `z = 2x`.
    pub fn fair_lossless(x: f64) -> Result<Self> {
        let y = fair_y(x)?;
        Self::new(x, y, 2.0 * x)
    }

    pub fn validate(&self) -> Result<()> {
        check_unit("x", self.x)?;
        check_unit("y", self.y)?;
        check_unit("z", self.z)?;
        Ok(())
    }
}

/// Transmissions of the channel, the two delay lines and the detectors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LossBudget {
    /// Alice-to-Bob channel.
    pub eta_t: f64,
    /// Alice's delay line.
    pub eta_f_a: f64,
    /// Bob's delay line.
    pub eta_f_b: f64,
    pub eta_d_a: f64,
    pub eta_d_b: f64,
    /// Dark-count probability of every (threshold) detector.
    #[serde(default)]
    pub p_dc: f64,
}

impl LossBudget {
    pub fn new(eta_t: f64, eta_f_a: f64, eta_f_b: f64, eta_d_a: f64, eta_d_b: f64, p_dc: f64) -> Result<Self> {
        let b = Self {
            eta_t,
            eta_f_a,
            eta_f_b,
            eta_d_a,
            eta_d_b,
            p_dc,
        };
        b.validate()?;
        Ok(b)
    }

    pub fn lossless() -> Self {
        Self {
            eta_t: 1.0,
            eta_f_a: 1.0,
            eta_f_b: 1.0,
            eta_d_a: 1.0,
            eta_d_b: 1.0,
            p_dc: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for eta in [self.eta_t, self.eta_f_a, self.eta_f_b] {
            check_efficiency(eta)?;
        }
        for eta in [self.eta_d_a, self.eta_d_b] {
            if !(eta > 0.0 && eta <= 1.0) {
                return Err(Error::EfficiencyOutOfRange(eta));
            }
        }
        if !(0.0..1.0).contains(&self.p_dc) {
            return Err(Error::ParameterOutOfRange {
                name: "p_dc",
                value: self.p_dc,
                lo: 0.0,
                hi: 1.0,
            });
        }
        Ok(())
    }

    pub fn is_lossless(&self) -> bool {
        *self == Self::lossless()
    }

    pub fn detector_a(&self) -> Result<DetectorModel> {
        DetectorModel::new(DetectorKind::Threshold, self.eta_d_a, self.p_dc)
    }

    pub fn detector_b(&self) -> Result<DetectorModel> {
        DetectorModel::new(DetectorKind::Threshold, self.eta_d_b, self.p_dc)
    }
}

impl Default for LossBudget {
    fn default() -> Self {
        Self::lossless()
    }
}

/// Joint outcome of an honest run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OutcomeDistribution {
    pub p_alice_wins: f64,
    pub p_bob_wins: f64,
    pub p_abort: f64,
}

impl OutcomeDistribution {
    pub fn max_deviation(&self, other: &Self) -> f64 {
        (self.p_alice_wins - other.p_alice_wins)
            .abs()
            .max((self.p_bob_wins - other.p_bob_wins).abs())
            .max((self.p_abort - other.p_abort).abs())
    }
}

/// Bob's reflectivity that makes the lossless protocol fair:
/// `y = 1 - 1/(2(1-x))`.
pub fn fair_y(x: f64) -> Result<f64> {
    if !(0.0..=0.5).contains(&x) {
        return Err(Error::XOutOfFairRange(x));
    }
    Ok((1.0 - 1.0 / (2.0 * (1.0 - x))).max(0.0))
}

/// Verification reflectivity for which an honest lossless run never aborts,
/// `z = x / (1 - (1-x)(1-y))`.
pub fn no_abort_z(x: f64, y: f64) -> Result<f64> {
    check_unit("x", x)?;
    check_unit("y", y)?;
    let denom = 1.0 - (1.0 - x) * (1.0 - y);
    if denom <= 0.0 {
        return Err(Error::DegenerateDenominator("no_abort_z: x = y = 0"));
    }
    Ok(x / denom)
}

/// Honest winning and abort probabilities in closed form.
pub fn honest_closed_form(params: &ProtocolParams, losses: &LossBudget) -> Result<OutcomeDistribution> {
    params.validate()?;
    losses.validate()?;
    let ProtocolParams { x, y, z } = *params;
    let gain = losses.eta_t * losses.eta_d_b;
    let amp = (x * z * losses.eta_f_a).sqrt() + ((1.0 - x) * y * (1.0 - z) * losses.eta_f_b).sqrt();
    let p_alice_wins = gain * amp * amp;
    let p_bob_wins = gain * (1.0 - x) * (1.0 - y);
    Ok(OutcomeDistribution {
        p_alice_wins,
        p_bob_wins,
        p_abort: 1.0 - p_alice_wins - p_bob_wins,
    })
}

/// Runs the lossy honest circuit on the Fock engine.
///
/// Circuit: `BS(x)` on (0,1); delay loss on 0 and channel loss on 1;
/// `BS(y)` on (1,2); Bob's delay loss on 1; Bob's detector on 2 decides the
/// branch. For `c = 0` mode 0 travels to Bob (channel loss again), meets mode
/// 1 on `BS(z)` and Bob looks for (click, no click). For `c = 1` Alice checks
/// that her mode is empty. Branches are weighted exactly, no sampling.
///
/// With dark counts enabled this departs from [`honest_closed_form`], which
/// has no dark-count term.
pub fn honest_simulated(
    params: &ProtocolParams,
    losses: &LossBudget,
    basis: Arc<FockBasis>,
) -> Result<OutcomeDistribution> {
    params.validate()?;
    losses.validate()?;
    if basis.mode_count() != 3 {
        return Err(Error::WrongModeCount {
            expected: 3,
            got: basis.mode_count(),
        });
    }
    if basis.max_total_photons() < 1 {
        return Err(Error::TruncationTooSmall {
            needed: 1,
            cap: basis.max_total_photons(),
        });
    }
    let det_a = losses.detector_a()?;
    let det_b = losses.detector_b()?;

    let mut rho = prepare_fock(basis, &[1, 0, 0])?;
    rho = apply_beamsplitter(&rho, &BeamSplitterSpec::new(params.x, 0, 1)?)?;
    rho = apply_loss(&rho, 0, losses.eta_f_a)?;
    rho = apply_loss(&rho, 1, losses.eta_t)?;
    rho = apply_beamsplitter(&rho, &BeamSplitterSpec::new(params.y, 1, 2)?)?;
    rho = apply_loss(&rho, 1, losses.eta_f_b)?;

    use ModeOutcome::{Click, NoClick, Traced};

    let c0 = condition(&rho, &[Traced, Traced, NoClick(det_b)])?;
    let p_alice_wins = match c0.state {
        Some(s) => {
            let s = apply_loss(&s, 0, losses.eta_t)?;
            let s = apply_beamsplitter(&s, &BeamSplitterSpec::new(params.z, 0, 1)?)?;
            c0.probability * outcome_probability(&s, &[Click(det_b), NoClick(det_b), Traced])?
        }
        None => 0.0,
    };

    let c1 = condition(&rho, &[Traced, Traced, Click(det_b)])?;
    let p_bob_wins = match c1.state {
        Some(s) => c1.probability * outcome_probability(&s, &[NoClick(det_a), Traced, Traced])?,
        None => 0.0,
    };

    Ok(OutcomeDistribution {
        p_alice_wins,
        p_bob_wins,
        p_abort: 1.0 - p_alice_wins - p_bob_wins,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn basis() -> Arc<FockBasis> {
        Arc::new(FockBasis::new(3, 1).unwrap())
    }

    #[test]
    fn fair_y_values() {
        assert_eq!(fair_y(0.0).unwrap(), 0.5);
        assert_eq!(fair_y(0.5).unwrap(), 0.0);
        let x = 1.0 - FRAC_1_SQRT_2;
        assert_abs_diff_eq!(fair_y(x).unwrap(), 1.0 - FRAC_1_SQRT_2, epsilon = 1e-15);
        assert_abs_diff_eq!(fair_y(x).unwrap(), 0.292893218813452, epsilon = 1e-12);
        assert_eq!(fair_y(0.6).unwrap_err(), Error::XOutOfFairRange(0.6));
    }

    #[test]
    fn no_abort_z_values() {
        assert_abs_diff_eq!(no_abort_z(0.25, 1.0 / 3.0).unwrap(), 0.5, epsilon = 1e-15);
        assert_eq!(no_abort_z(0.0, 0.7).unwrap(), 0.0);
        assert!(matches!(no_abort_z(0.0, 0.0), Err(Error::DegenerateDenominator(_))));
        for i in 0..=50 {
            let x = 0.01 * i as f64;
            assert_abs_diff_eq!(no_abort_z(x, fair_y(x).unwrap()).unwrap(), 2.0 * x, epsilon = 1e-14);
        }
    }

    #[test]
    fn no_abort_z_at_scf_point() {
        let z = no_abort_z(0.38, 0.31).unwrap();
        assert!((z - 0.66).abs() < 0.01, "z = {z}");
    }

    #[test]
    fn closed_form_balanced_lossless() {
        let p = ProtocolParams::fair_lossless(1.0 - FRAC_1_SQRT_2).unwrap();
        let d = honest_closed_form(&p, &LossBudget::lossless()).unwrap();
        assert_abs_diff_eq!(d.p_alice_wins, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(d.p_bob_wins, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(d.p_abort, 0.0, epsilon = 1e-15);

        let p = ProtocolParams::new(0.25, 1.0 / 3.0, 0.5).unwrap();
        let d = honest_closed_form(&p, &LossBudget::lossless()).unwrap();
        assert_abs_diff_eq!(d.p_alice_wins, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(d.p_bob_wins, 0.5, epsilon = 1e-15);
    }

    #[test]
    fn closed_form_no_transmission() {
        let p = ProtocolParams::fair_lossless(0.2).unwrap();
        let losses = LossBudget {
            eta_t: 0.0,
            ..LossBudget::lossless()
        };
        let d = honest_closed_form(&p, &losses).unwrap();
        assert_eq!((d.p_alice_wins, d.p_bob_wins, d.p_abort), (0.0, 0.0, 1.0));
        let s = honest_simulated(&p, &losses, basis()).unwrap();
        assert_abs_diff_eq!(s.p_abort, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn simulated_matches_closed_form_examples() {
        let cases = [
            (ProtocolParams::fair_lossless(1.0 - FRAC_1_SQRT_2).unwrap(), LossBudget::lossless()),
            (ProtocolParams::new(0.25, 1.0 / 3.0, 0.5).unwrap(), LossBudget::lossless()),
            (
                ProtocolParams::new(0.4, 0.2, 0.57).unwrap(),
                LossBudget::new(0.9, 0.8, 0.85, 0.7, 0.95, 0.0).unwrap(),
            ),
        ];
        for (p, l) in cases {
            let a = honest_closed_form(&p, &l).unwrap();
            let b = honest_simulated(&p, &l, basis()).unwrap();
            assert!(a.max_deviation(&b) <= 1e-10, "{a:?} vs {b:?}");
        }
    }

    #[test]
    fn x_zero_alice_wins_only_by_reflection() {
        // the photon starts with Bob; Alice only wins on what BS(y) returns
        let p = ProtocolParams::new(0.0, 0.4, 0.3).unwrap();
        let d = honest_simulated(&p, &LossBudget::lossless(), basis()).unwrap();
        assert_abs_diff_eq!(d.p_alice_wins, 0.4 * 0.7, epsilon = 1e-12);
        let p = ProtocolParams::new(0.0, 0.4, 1.0).unwrap();
        let d = honest_simulated(&p, &LossBudget::lossless(), basis()).unwrap();
        assert_abs_diff_eq!(d.p_alice_wins, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn generic_no_abort_lossless() {
        for &(x, y) in &[(0.1, 0.2), (0.3, 0.7), (0.45, 0.05), (0.8, 0.5)] {
            let z = no_abort_z(x, y).unwrap();
            let d = honest_simulated(&ProtocolParams::new(x, y, z).unwrap(), &LossBudget::lossless(), basis()).unwrap();
            assert!(d.p_abort.abs() <= 1e-10, "x={x} y={y}: {d:?}");
        }
    }

    #[test]
    fn simulation_needs_a_photon() {
        let p = ProtocolParams::fair_lossless(0.2).unwrap();
        let b = Arc::new(FockBasis::new(3, 0).unwrap());
        assert_eq!(
            honest_simulated(&p, &LossBudget::lossless(), b).unwrap_err(),
            Error::TruncationTooSmall { needed: 1, cap: 0 }
        );
    }

    #[test]
    fn dark_counts_only_move_the_simulation() {
        let p = ProtocolParams::fair_lossless(0.25).unwrap();
        let noisy = LossBudget {
            p_dc: 1e-3,
            ..LossBudget::lossless()
        };
        let closed = honest_closed_form(&p, &noisy).unwrap();
        let clean = honest_closed_form(&p, &LossBudget::lossless()).unwrap();
        assert_eq!(closed, clean);
        let sim = honest_simulated(&p, &noisy, basis()).unwrap();
        assert!(sim.max_deviation(&closed) > 1e-6);
        assert!(sim.p_abort > 0.0);
    }

    #[test]
    fn budget_validation() {
        assert!(LossBudget::new(1.1, 1.0, 1.0, 1.0, 1.0, 0.0).is_err());
        assert!(LossBudget::new(1.0, 1.0, 1.0, 0.0, 1.0, 0.0).is_err());
        assert!(LossBudget::new(1.0, 1.0, 1.0, 1.0, 1.0, 1.0).is_err());
        assert!(ProtocolParams::new(0.2, -0.1, 0.3).is_err());
    }
}
