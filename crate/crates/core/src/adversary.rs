//! Cheating probabilities for a dishonest Alice or Bob.
//!
//! Closed forms for both parties, Alice's optimal attack states, an
//! independent eigenvalue oracle built on the Fock engine, and the
//! conversion of an unbalanced weak coin flip into a strong one.

use std::f64::consts::PI;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{check_unit, Error, Result};
use crate::fock::{
    pattern_operator, two_mode_unitary, BeamSplitterSpec, DetectorKind, DetectorModel, FockBasis, ModeOutcome,
    Operator, QuantumState, C64,
};
use crate::protocol::{LossBudget, ProtocolParams};

/// Dishonest Bob announces `c = 1` and wins unless Alice's detector clicks:
/// `1 - x eta_f^(A) eta_d^(A)`.
pub fn bob_cheat(params: &ProtocolParams, losses: &LossBudget) -> Result<f64> {
    Ok(1.0 - bob_caught_probability(params, losses)?)
}

/// Probability that Bob's optimal attack is caught by Alice's detector.
pub fn bob_caught_probability(params: &ProtocolParams, losses: &LossBudget) -> Result<f64> {
    params.validate()?;
    losses.validate()?;
    Ok(params.x * losses.eta_f_a * losses.eta_d_a)
}

/// Alice's optimal cheating probability without losses, `1 - (1-y)(1-z)`,
/// for number-resolving and threshold detectors alike.
pub fn alice_cheat_lossless(params: &ProtocolParams) -> Result<f64> {
    params.validate()?;
    Ok(1.0 - (1.0 - params.y) * (1.0 - params.z))
}

/// `r` and `s` of the lossy bound `max_l r^l - s^l`.
pub fn cheat_bases(params: &ProtocolParams, losses: &LossBudget) -> (f64, f64) {
    let eta_d = losses.eta_d_b;
    let r = 1.0 - eta_d * (1.0 - params.y * losses.eta_f_b) * (1.0 - params.z);
    (r, 1.0 - eta_d)
}

fn gap(r: f64, s: f64, l: usize) -> f64 {
    r.powi(l as i32) - s.powi(l as i32)
}

/// Stationary point of `r^lambda - s^lambda` over positive reals, written
/// with real logarithms (`ln r`, `ln s` are both negative).
pub fn lambda_one(r: f64, s: f64) -> f64 {
    let (lr, ls) = (r.ln(), s.ln());
    (ls / lr).ln() / (lr - ls)
}

/// First maximizer of `r^l - s^l` over `l = 1..=l_max` (smallest on ties).
pub fn scan_l_one(r: f64, s: f64, l_max: usize) -> (usize, f64) {
    let mut best = (1, gap(r, s, 1));
    for l in 2..=l_max {
        let v = gap(r, s, l);
        if v > best.1 {
            best = (l, v);
        }
    }
    best
}

/// Alice's lossy cheating probability and the photon number of her attack.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LossyCheat {
    pub probability: f64,
    pub l_one: usize,
    /// Continuous maximizer, absent in the analytic corner cases.
    pub lambda: Option<f64>,
    /// Choice made by the floor/ceil rule on `lambda`.
    pub formula_l_one: Option<usize>,
}

impl LossyCheat {
    /// Whether the floor/ceil rule picked the same `l` as the scan.
    pub fn formula_agrees(&self) -> bool {
        self.formula_l_one.is_none_or(|l| l == self.l_one)
    }
}

/// `max_{l >= 1} (1 - eta_d (1 - y eta_f)(1 - z))^l - (1 - eta_d)^l` with
/// Bob's delay-line and detector efficiencies.
///
/// `l_one` comes from the floor/ceil rule on [`lambda_one`] and is checked
/// against a scan of `l = 1..=max(200, ceil(3 lambda))`; the scan wins if
/// they disagree. Ties go to the smaller photon number.
pub fn alice_cheat_lossy(params: &ProtocolParams, losses: &LossBudget) -> Result<LossyCheat> {
    if losses.eta_d_b == 0.0 {
        return Err(Error::DegenerateEfficiency);
    }
    params.validate()?;
    losses.validate()?;
    let (r, s) = cheat_bases(params, losses);

    if s == 0.0 {
        return Ok(LossyCheat {
            probability: r,
            l_one: 1,
            lambda: None,
            formula_l_one: None,
        });
    }
    if r == s {
        return Ok(LossyCheat {
            probability: 0.0,
            l_one: 1,
            lambda: None,
            formula_l_one: None,
        });
    }
    if r >= 1.0 {
        return Err(Error::NoMaximizer);
    }

    let lambda = lambda_one(r, s);
    let lo = (lambda.floor() as usize).max(1);
    let hi = (lambda.ceil() as usize).max(1);
    let formula = if gap(r, s, lo) >= gap(r, s, hi) { lo } else { hi };

    let l_max = 200usize.max((3.0 * lambda).ceil() as usize);
    let (scanned, value) = scan_l_one(r, s, l_max);
    let l_one = if gap(r, s, formula) == value { formula.min(scanned) } else { scanned };

    Ok(LossyCheat {
        probability: gap(r, s, l_one),
        l_one,
        lambda: Some(lambda),
        formula_l_one: Some(formula),
    })
}

/// Amplitudes (in `basis` order) of `(1 (x) R(pi)) H^(a) |0 l_one>` with
/// `a = y(1-z) eta_f / (y eta_f + z - y z eta_f)`.
pub fn alice_optimal_amplitudes(
    params: &ProtocolParams,
    losses: &LossBudget,
    basis: &FockBasis,
) -> Result<Vec<C64>> {
    if basis.mode_count() != 2 {
        return Err(Error::WrongModeCount {
            expected: 2,
            got: basis.mode_count(),
        });
    }
    let l_one = alice_cheat_lossy(params, losses)?.l_one;
    if basis.max_total_photons() < l_one {
        return Err(Error::TruncationTooSmall {
            needed: l_one,
            cap: basis.max_total_photons(),
        });
    }
    let y_eff = params.y * losses.eta_f_b;
    let denom = y_eff + params.z - y_eff * params.z;
    if denom <= 0.0 {
        return Err(Error::DegenerateDenominator("optimal-state reflectivity"));
    }
    let a = y_eff * (1.0 - params.z) / denom;
    let h = BeamSplitterSpec::new(a.clamp(0.0, 1.0), 0, 1)?.matrix().map(|row| row.map(C64::from));
    let u = two_mode_unitary(basis, 0, 1, h)?;
    let col = basis.checked_index(&[0, l_one])?;
    Ok(basis
        .iter()
        .enumerate()
        .map(|(i, occ)| u[(i, col)] * C64::from_polar(1.0, PI * occ[1] as f64))
        .collect())
}

/// Alice's optimal two-mode attack state; reduces to
/// `sqrt(z/b)|10> + sqrt(y(1-z)/b)|01>`, `b = 1-(1-y)(1-z)`, without loss.
pub fn alice_optimal_state(
    params: &ProtocolParams,
    losses: &LossBudget,
    basis: Arc<FockBasis>,
) -> Result<QuantumState> {
    let amps = alice_optimal_amplitudes(params, losses, &basis)?;
    QuantumState::from_pure(basis, &amps)
}

/// Operator `M` on Alice's two modes with `Tr[sigma M]` her winning
/// probability when she sends `sigma` and Bob is honest.
///
/// Built in the Heisenberg picture from Bob's lossy circuit on a three-mode
/// `basis`: `BS(y)` on (1,2), delay loss on 1, `BS(z)` on (0,1), then the
/// (click, no click, no click) element for threshold detectors, or
/// `|100><100|` seen through efficiency `eta_d` for number-resolving ones.
pub fn alice_win_operator(
    params: &ProtocolParams,
    losses: &LossBudget,
    basis: Arc<FockBasis>,
    kind: DetectorKind,
) -> Result<Operator> {
    params.validate()?;
    losses.validate()?;
    if basis.mode_count() != 3 {
        return Err(Error::WrongModeCount {
            expected: 3,
            got: basis.mode_count(),
        });
    }
    let pattern = match kind {
        DetectorKind::Threshold => {
            let det = DetectorModel::new(DetectorKind::Threshold, losses.eta_d_b, losses.p_dc)?;
            [ModeOutcome::Click(det), ModeOutcome::NoClick(det), ModeOutcome::NoClick(det)]
        }
        DetectorKind::NumberResolving => {
            let det = DetectorModel::number_resolving(losses.eta_d_b)?;
            [ModeOutcome::Count(1, det), ModeOutcome::Count(0, det), ModeOutcome::Count(0, det)]
        }
    };
    pattern_operator(basis, &pattern)?
        .heisenberg_beamsplitter(&BeamSplitterSpec::new(params.z, 0, 1)?)?
        .heisenberg_loss(1, losses.eta_f_b)?
        .heisenberg_beamsplitter(&BeamSplitterSpec::new(params.y, 1, 2)?)?
        .restrict_to_vacuum_tail(2)
}

/// Outcome of the eigenvalue oracle.
#[derive(Debug, Clone)]
pub struct BruteForceCheat {
    pub probability: f64,
    /// Maximizing eigenvector on Alice's two modes.
    pub amplitudes: Vec<C64>,
    pub state: QuantumState,
}

/// Maximizes Alice's winning probability over every state of her two modes
/// up to the cap of `basis` (three modes): the largest eigenvalue of
/// [`alice_win_operator`]. Pure states suffice by convexity.
pub fn alice_cheat_bruteforce(
    params: &ProtocolParams,
    losses: &LossBudget,
    basis: Arc<FockBasis>,
) -> Result<BruteForceCheat> {
    let l_one = alice_cheat_lossy(params, losses)?.l_one;
    if basis.max_total_photons() < l_one + 2 {
        return Err(Error::TruncationTooSmall {
            needed: l_one + 2,
            cap: basis.max_total_photons(),
        });
    }
    bruteforce_with(params, losses, basis, DetectorKind::Threshold)
}

/// Eigen-oracle for a given detector kind, without the truncation guard.
pub fn bruteforce_with(
    params: &ProtocolParams,
    losses: &LossBudget,
    basis: Arc<FockBasis>,
    kind: DetectorKind,
) -> Result<BruteForceCheat> {
    let m = alice_win_operator(params, losses, basis, kind)?;
    let (probability, v) = m.max_eigenpair();
    let amplitudes: Vec<C64> = v.iter().copied().collect();
    let state = QuantumState::from_pure(m.basis_arc().clone(), &amplitudes)?;
    Ok(BruteForceCheat {
        probability,
        amplitudes,
        state,
    })
}

/// Probability that Bob's detector clicks when Alice deliberately sends `n`
/// photons to lose: `1 - [y + (1-eta)(1-y)]^n`.
pub fn classical_lose_limit(y: f64, eta: f64, n: u32) -> Result<f64> {
    check_unit("y", y)?;
    if y >= 1.0 {
        return Err(Error::ParameterOutOfRange {
            name: "y",
            value: y,
            lo: 0.0,
            hi: 1.0,
        });
    }
    if !(eta > 0.0 && eta <= 1.0) {
        return Err(Error::EfficiencyOutOfRange(eta));
    }
    if n == 0 {
        return Err(Error::ParameterOutOfRange {
            name: "n",
            value: 0.0,
            lo: 1.0,
            hi: f64::INFINITY,
        });
    }
    Ok(1.0 - (y + (1.0 - eta) * (1.0 - y)).powi(n as i32))
}

/// Bias of the strong coin flip built from a weak one with honest
/// probabilities `(p, 1-p)` and cheating probabilities `(p+eps, 1-p+eps)`.
pub fn scf_bias(p: f64, epsilon: f64) -> Result<f64> {
    check_unit("p", p)?;
    if epsilon.is_nan() || epsilon < 0.0 || p + epsilon >= 2.0 {
        return Err(Error::ParameterOutOfRange {
            name: "epsilon",
            value: epsilon,
            lo: 0.0,
            hi: 2.0 - p,
        });
    }
    Ok((0.5 - 0.5 * (p - epsilon)).max(1.0 / (2.0 - (p + epsilon)) - 0.5))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScfResult {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub p: f64,
    pub epsilon: f64,
    pub bias: f64,
    /// Residuals of the three defining equations at the root.
    pub residuals: [f64; 3],
}

impl ScfResult {
    pub fn recompute_bias(&self) -> Result<f64> {
        scf_bias(self.p, self.epsilon)
    }
}

fn scf_x(y: f64) -> f64 {
    y * y / ((1.0 - y) * (1.0 - 2.0 * y))
}

fn scf_z(y: f64) -> f64 {
    y / ((1.0 - y) * (1.0 - y))
}

fn scf_residual(y: f64) -> f64 {
    let (x, z) = (scf_x(y), scf_z(y));
    1.0 - x / 2.0 - 1.0 / (2.0 - y - z + y * z)
}

/// Solves the parameter system of the strong-coin-flip construction by
/// bisection in `y` on `(0, 1/2)`.
pub fn scf_solve() -> Result<ScfResult> {
    let (mut lo, mut hi) = (1e-9, 0.5 - 1e-9);
    let (f_lo, f_hi) = (scf_residual(lo), scf_residual(hi));
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::NoRootInUnitInterval);
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if scf_residual(mid).signum() == f_lo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 {
            break;
        }
    }
    let y = 0.5 * (lo + hi);
    let (x, z) = (scf_x(y), scf_z(y));
    if !(0.0..=1.0).contains(&x) || !(0.0..=1.0).contains(&z) {
        return Err(Error::NoRootInUnitInterval);
    }

    let p = 1.0 - (1.0 - x) * (1.0 - y);
    let p_d_alice = 1.0 - (1.0 - y) * (1.0 - z);
    let epsilon = p_d_alice - p;
    let p_d_bob = 1.0 - x;
    let residual = (p_d_bob - (1.0 - p + epsilon)).abs();
    if residual > 1e-9 {
        return Err(Error::InconsistentScf { residual });
    }
    Ok(ScfResult {
        x,
        y,
        z,
        p,
        epsilon,
        bias: scf_bias(p, epsilon)?,
        residuals: [x - scf_x(y), z - scf_z(y), scf_residual(y)],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocol::fair_y;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn lossy(eta_f_b: f64, eta_d_b: f64) -> LossBudget {
        LossBudget {
            eta_f_b,
            eta_d_b,
            ..LossBudget::lossless()
        }
    }

    #[test]
    fn bob_cheat_values() {
        let p = ProtocolParams::fair_lossless(1.0 - FRAC_1_SQRT_2).unwrap();
        assert_abs_diff_eq!(bob_cheat(&p, &LossBudget::lossless()).unwrap(), FRAC_1_SQRT_2, epsilon = 1e-15);
        let p0 = ProtocolParams::new(0.0, 0.3, 0.2).unwrap();
        let l = LossBudget::new(0.5, 0.6, 0.7, 0.8, 0.9, 0.0).unwrap();
        assert_eq!(bob_cheat(&p0, &l).unwrap(), 1.0);
        let p = ProtocolParams::new(0.3, 0.3, 0.3).unwrap();
        let l = LossBudget {
            eta_f_a: 0.9,
            eta_d_a: 0.9,
            ..LossBudget::lossless()
        };
        assert_abs_diff_eq!(bob_cheat(&p, &l).unwrap(), 0.757, epsilon = 1e-15);
        assert_abs_diff_eq!(bob_caught_probability(&p, &l).unwrap(), 0.243, epsilon = 1e-15);
    }

    #[test]
    fn alice_lossless_values() {
        let p = ProtocolParams::fair_lossless(1.0 - FRAC_1_SQRT_2).unwrap();
        assert_abs_diff_eq!(alice_cheat_lossless(&p).unwrap(), FRAC_1_SQRT_2, epsilon = 1e-15);
        assert_eq!(alice_cheat_lossless(&ProtocolParams::new(0.3, 0.0, 0.0).unwrap()).unwrap(), 0.0);
        let p = ProtocolParams::fair_lossless(0.25).unwrap();
        let a = alice_cheat_lossless(&p).unwrap();
        let b = bob_cheat(&p, &LossBudget::lossless()).unwrap();
        assert_abs_diff_eq!(a, 2.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(b, 0.75, epsilon = 1e-15);
        assert_abs_diff_eq!(a * b, 0.5, epsilon = 1e-15);
    }

    #[test]
    fn perfect_detectors_pick_one_photon() {
        let p = ProtocolParams::new(0.3, 0.4, 0.5).unwrap();
        let c = alice_cheat_lossy(&p, &lossy(0.8, 1.0)).unwrap();
        assert_eq!(c.l_one, 1);
        assert_abs_diff_eq!(c.probability, 1.0 - (1.0 - 0.4 * 0.8) * 0.5, epsilon = 1e-15);
    }

    #[test]
    fn lossy_reduces_to_lossless() {
        let p = ProtocolParams::new(0.3, 0.4, 0.5).unwrap();
        let exact = alice_cheat_lossless(&p).unwrap();
        assert_abs_diff_eq!(alice_cheat_lossy(&p, &LossBudget::lossless()).unwrap().probability, exact, epsilon = 1e-15);
        let near = alice_cheat_lossy(&p, &lossy(1.0, 1.0 - 1e-9)).unwrap();
        assert_abs_diff_eq!(near.probability, exact, epsilon = 1e-8);
    }

    #[test]
    fn lossy_matches_exhaustive_scan() {
        // frozen from an l <= 200 scan: r = 0.680166..., s = 0.05
        let p = ProtocolParams::new(0.0, 1.0 / 3.0, 0.5).unwrap();
        let c = alice_cheat_lossy(&p, &lossy(0.98, 0.95)).unwrap();
        let (r, s) = cheat_bases(&p, &lossy(0.98, 0.95));
        let mut best = (0, f64::MIN);
        for l in 1..=200 {
            let v = r.powi(l) - s.powi(l);
            if v > best.1 {
                best = (l as usize, v);
            }
        }
        assert_eq!(c.l_one, best.0);
        assert_eq!(c.l_one, 1);
        assert_abs_diff_eq!(c.probability, best.1, epsilon = 1e-15);
        assert_abs_diff_eq!(c.probability, 0.6301666666666667, epsilon = 1e-14);
        assert!(c.formula_agrees());
    }

    #[test]
    fn low_efficiency_prefers_more_photons() {
        let p = ProtocolParams::new(0.0, 0.5, 0.6).unwrap();
        let c = alice_cheat_lossy(&p, &lossy(1.0, 0.3)).unwrap();
        assert!(c.l_one > 1, "{c:?}");
        assert!(c.formula_agrees());
        assert!(c.probability <= alice_cheat_lossless(&p).unwrap());
    }

    #[test]
    fn lossy_corner_cases() {
        let p = ProtocolParams::new(0.2, 0.0, 0.0).unwrap();
        let c = alice_cheat_lossy(&p, &lossy(1.0, 0.5)).unwrap();
        assert_eq!((c.probability, c.l_one), (0.0, 1));
        let p = ProtocolParams::new(0.2, 0.3, 1.0).unwrap();
        assert_eq!(alice_cheat_lossy(&p, &lossy(1.0, 0.5)).unwrap_err(), Error::NoMaximizer);
        let zero = LossBudget {
            eta_d_b: 0.0,
            ..LossBudget::lossless()
        };
        assert_eq!(alice_cheat_lossy(&p, &zero).unwrap_err(), Error::DegenerateEfficiency);
    }

    #[test]
    fn optimal_state_fair_family() {
        let b = Arc::new(FockBasis::new(2, 2).unwrap());
        for &x in &[0.1, 0.25, 1.0 - FRAC_1_SQRT_2, 0.45] {
            let p = ProtocolParams::fair_lossless(x).unwrap();
            let amps = alice_optimal_amplitudes(&p, &LossBudget::lossless(), &b).unwrap();
            for (i, occ) in b.iter().enumerate() {
                let expect = match occ {
                    [1, 0] => 2.0 * (x * (1.0 - x)).sqrt(),
                    [0, 1] => 1.0 - 2.0 * x,
                    _ => 0.0,
                };
                assert_abs_diff_eq!(amps[i].re, expect, epsilon = 1e-14);
                assert_abs_diff_eq!(amps[i].im, 0.0, epsilon = 1e-14);
            }
        }
        let p = ProtocolParams::fair_lossless(0.5).unwrap();
        let s = alice_optimal_state(&p, &LossBudget::lossless(), b.clone()).unwrap();
        let i = b.index_of(&[1, 0]).unwrap();
        assert_abs_diff_eq!(s.matrix()[(i, i)].re, 1.0, epsilon = 1e-14);
    }

    #[test]
    fn optimal_state_single_photon_lossy_uses_effective_y() {
        // l_one = 1 with eta_f < 1: same as the lossless state at y eta_f
        let b = Arc::new(FockBasis::new(2, 1).unwrap());
        let p = ProtocolParams::new(0.1, 0.4, 0.5).unwrap();
        let l = lossy(0.7, 1.0);
        let amps = alice_optimal_amplitudes(&p, &l, &b).unwrap();
        let eff = ProtocolParams::new(0.1, 0.4 * 0.7, 0.5).unwrap();
        let ref_amps = alice_optimal_amplitudes(&eff, &LossBudget::lossless(), &b).unwrap();
        for (a, r) in amps.iter().zip(&ref_amps) {
            assert_abs_diff_eq!((a - r).norm(), 0.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn optimal_state_needs_room() {
        let b = Arc::new(FockBasis::new(2, 1).unwrap());
        let p = ProtocolParams::new(0.0, 0.5, 0.6).unwrap();
        assert!(matches!(
            alice_optimal_state(&p, &lossy(1.0, 0.3), b),
            Err(Error::TruncationTooSmall { .. })
        ));
    }

    #[test]
    fn bruteforce_lossless_matches_closed_form() {
        let b = Arc::new(FockBasis::new(3, 3).unwrap());
        let p = ProtocolParams::fair_lossless(0.2).unwrap();
        let bf = alice_cheat_bruteforce(&p, &LossBudget::lossless(), b.clone()).unwrap();
        assert_abs_diff_eq!(bf.probability, alice_cheat_lossless(&p).unwrap(), epsilon = 1e-9);
        let phi = alice_optimal_amplitudes(&p, &LossBudget::lossless(), bf.state.basis()).unwrap();
        assert!(bf.state.fidelity_with_pure(&phi).unwrap() >= 1.0 - 1e-8);
    }

    #[test]
    fn bruteforce_zero_reflectivities() {
        let b = Arc::new(FockBasis::new(3, 3).unwrap());
        let p = ProtocolParams::new(0.3, 0.0, 0.0).unwrap();
        let bf = alice_cheat_bruteforce(&p, &LossBudget::lossless(), b).unwrap();
        assert_abs_diff_eq!(bf.probability, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn bruteforce_truncation_guard() {
        let b = Arc::new(FockBasis::new(3, 2).unwrap());
        let p = ProtocolParams::fair_lossless(0.2).unwrap();
        assert_eq!(
            alice_cheat_bruteforce(&p, &LossBudget::lossless(), b).unwrap_err(),
            Error::TruncationTooSmall { needed: 3, cap: 2 }
        );
    }

    #[test]
    fn classical_lose_limit_values() {
        assert_abs_diff_eq!(classical_lose_limit(0.3, 1.0, 1).unwrap(), 0.7, epsilon = 1e-15);
        assert_eq!(classical_lose_limit(0.0, 1.0, 7).unwrap(), 1.0);
        let expect = 1.0 - (1.0f64 / 3.0 + 0.05 * 2.0 / 3.0).powi(10);
        assert_abs_diff_eq!(classical_lose_limit(1.0 / 3.0, 0.95, 10).unwrap(), expect, epsilon = 1e-15);
        assert!(classical_lose_limit(1.0, 0.9, 3).is_err());
    }

    #[test]
    fn scf_bias_values() {
        assert_abs_diff_eq!(scf_bias(1.0, 0.0).unwrap(), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(scf_bias(0.5, 0.0).unwrap(), 0.25, epsilon = 1e-15);
        assert_abs_diff_eq!(scf_bias(0.5, 0.5).unwrap(), 0.5, epsilon = 1e-15);
        assert!(scf_bias(0.5, -0.1).is_err());
    }

    #[test]
    fn scf_solution() {
        let r = scf_solve().unwrap();
        assert!((r.x - 0.38).abs() <= 0.01, "{r:?}");
        assert!((r.y - 0.31).abs() <= 0.01, "{r:?}");
        assert!((r.z - 0.66).abs() <= 0.01, "{r:?}");
        assert!((r.bias - 0.31).abs() <= 0.005, "{r:?}");
        for res in r.residuals {
            assert!(res.abs() < 1e-10);
        }
        assert_abs_diff_eq!(r.recompute_bias().unwrap(), r.bias, epsilon = 1e-12);
        // the constructed protocol never aborts honestly
        assert_abs_diff_eq!(crate::protocol::no_abort_z(r.x, r.y).unwrap(), r.z, epsilon = 1e-9);
    }

    #[test]
    fn fair_family_product_law() {
        for i in 1..=9 {
            let x = 0.05 * i as f64;
            let p = ProtocolParams::new(x, fair_y(x).unwrap(), 2.0 * x).unwrap();
            let prod = alice_cheat_lossless(&p).unwrap() * bob_cheat(&p, &LossBudget::lossless()).unwrap();
            assert_abs_diff_eq!(prod, 0.5, epsilon = 1e-12);
        }
    }
}
