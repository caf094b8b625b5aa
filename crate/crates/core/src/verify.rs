//! Property checks run by `wcf verify`.
//!
//! Every check returns its worst deviation against a tolerance. Random
//! states come from a seeded ChaCha generator, so a run is reproducible.

use std::f64::consts::FRAC_1_SQRT_2;
use std::sync::Arc;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::adversary::{
    alice_cheat_bruteforce, alice_cheat_lossless, alice_cheat_lossy, alice_optimal_amplitudes, alice_win_operator,
    bob_cheat, bruteforce_with, classical_lose_limit, scf_solve,
};
use crate::error::Result;
use crate::fock::{
    apply_beamsplitter, apply_loss, apply_phase, loss_kraus_operators, outcome_probability, pattern_operator,
    prepare_fock, two_mode_unitary, BeamSplitterSpec, DetectorKind, DetectorModel, FockBasis, ModeOutcome, Operator,
    QuantumState, C64,
};
use crate::protocol::{fair_y, honest_closed_form, honest_simulated, LossBudget, ProtocolParams};
use crate::solver::{classical_cheat, link_budget, solve_fair_balanced, LinkModel, SolveResult};

/// Grid for the eigen-oracle comparison.
pub const ORACLE_YZ: [f64; 4] = [0.2, 0.4, 0.6, 0.8];
pub const ORACLE_ETA: [f64; 3] = [0.8, 0.9, 1.0];

/// Grid for simulator against closed form.
pub const SIM_XYZ: [f64; 5] = [0.1, 0.3, 0.5, 0.7, 0.9];
pub const SIM_ETA: [f64; 3] = [0.5, 0.8, 1.0];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// Worst deviation found, or a count of violations.
    pub worst: f64,
    pub tolerance: f64,
    pub detail: String,
}

impl Check {
    fn within(name: &str, worst: f64, tolerance: f64, detail: impl Into<String>) -> Self {
        Self {
            name: name.to_string(),
            passed: worst <= tolerance,
            worst,
            tolerance,
            detail: detail.into(),
        }
    }

    fn from_result(name: &str, tolerance: f64, r: Result<(f64, String)>) -> Self {
        match r {
            Ok((worst, detail)) => Self::within(name, worst, tolerance, detail),
            Err(e) => Self {
                name: name.to_string(),
                passed: false,
                worst: f64::NAN,
                tolerance,
                detail: format!("error: {e}"),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> usize {
        self.checks.iter().filter(|c| c.passed).count()
    }

    pub fn failed(&self) -> usize {
        self.checks.len() - self.passed()
    }

    pub fn all_passed(&self) -> bool {
        self.failed() == 0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Random states per randomized check.
    pub samples: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self { seed: 7, samples: 100 }
    }
}

/// Random mixed state of rank `rank` (at most `dim`).
pub fn random_state(basis: Arc<FockBasis>, rank: usize, rng: &mut impl Rng) -> QuantumState {
    let d = basis.dim();
    let g = DMatrix::from_fn(d, rank.clamp(1, d), |_, _| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    let rho = &g * g.adjoint();
    let t = rho.trace().re;
    QuantumState::from_density(basis, rho.map(|z| z / t)).expect("Gram matrix is a valid state")
}

/// Random normalized pure-state amplitudes.
pub fn random_amplitudes(dim: usize, rng: &mut impl Rng) -> Vec<C64> {
    let v: Vec<C64> = (0..dim)
        .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / n).collect()
}

fn perfect_vacuum() -> ModeOutcome {
    ModeOutcome::NoClick(DetectorModel::perfect_threshold())
}

/// Both sides of the trace identity that rewrites Bob's two beam splitters
/// (`BS(y)` on (1,2), then `BS(z)` on (0,1), modes 1,2 found empty) as a
/// phase, `BS(a)` on (0,1) and `BS(b)` on (1,2) with modes 0,2 found empty,
/// `b = 1-(1-y)(1-z)`, `a = y(1-z)/b`. `tau` lives on Alice's two modes.
pub fn trace_identity_sides(tau: &QuantumState, y: f64, z: f64) -> Result<(f64, f64)> {
    let rho = tau.with_vacuum_tail(3)?;
    let lhs_state = apply_beamsplitter(&apply_beamsplitter(&rho, &BeamSplitterSpec::new(y, 1, 2)?)?, &BeamSplitterSpec::new(z, 0, 1)?)?;
    let lhs = outcome_probability(&lhs_state, &[ModeOutcome::Traced, perfect_vacuum(), perfect_vacuum()])?;

    let b = 1.0 - (1.0 - y) * (1.0 - z);
    let a = if b > 0.0 { y * (1.0 - z) / b } else { 0.0 };
    let rhs_state = apply_phase(&rho, 1, std::f64::consts::PI)?;
    let rhs_state = apply_beamsplitter(&rhs_state, &BeamSplitterSpec::new(a, 0, 1)?)?;
    let rhs_state = apply_beamsplitter(&rhs_state, &BeamSplitterSpec::new(b, 1, 2)?)?;
    let rhs = outcome_probability(&rhs_state, &[perfect_vacuum(), ModeOutcome::Traced, perfect_vacuum()])?;
    Ok((lhs, rhs))
}

/// Largest entry of the difference between loss-then-splitter and
/// splitter-then-loss, with the same efficiency on both arms.
pub fn loss_commutation_deviation(state: &QuantumState, bs: &BeamSplitterSpec, eta: f64) -> Result<f64> {
    let (k, l) = bs.modes();
    let before = apply_beamsplitter(&apply_loss(&apply_loss(state, k, eta)?, l, eta)?, bs)?;
    let after = apply_loss(&apply_loss(&apply_beamsplitter(state, bs)?, k, eta)?, l, eta)?;
    Ok(max_abs(&(before.matrix() - after.matrix())))
}

fn max_abs(m: &DMatrix<C64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn trace_identity_check(cfg: &VerifyConfig, rng: &mut ChaCha8Rng) -> Result<(f64, String)> {
    let basis = Arc::new(FockBasis::new(2, 3)?);
    let mut worst: f64 = 0.0;
    for _ in 0..cfg.samples {
        let tau = random_state(basis.clone(), 3, rng);
        let (y, z) = (rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0));
        let (l, r) = trace_identity_sides(&tau, y, z)?;
        worst = worst.max((l - r).abs());
    }
    Ok((worst, format!("{} random states, cap 3", cfg.samples)))
}

fn loss_commutation_check(cfg: &VerifyConfig, rng: &mut ChaCha8Rng) -> Result<(f64, String)> {
    let basis = Arc::new(FockBasis::new(2, 3)?);
    let mut worst: f64 = 0.0;
    for _ in 0..cfg.samples {
        let s = random_state(basis.clone(), 2, rng);
        let bs = BeamSplitterSpec::new(rng.gen_range(0.0..1.0), 0, 1)?;
        worst = worst.max(loss_commutation_deviation(&s, &bs, rng.gen_range(0.0..1.0))?);
    }
    Ok((worst, format!("{} random states, cap 3", cfg.samples)))
}

/// Beam splitters preserve trace and photon-number distribution, and are
/// involutions.
fn unitary_check(cfg: &VerifyConfig, rng: &mut ChaCha8Rng) -> Result<(f64, String)> {
    let basis = Arc::new(FockBasis::new(3, 3)?);
    let mut worst: f64 = 0.0;
    for _ in 0..cfg.samples {
        let s = random_state(basis.clone(), 2, rng);
        let bs = BeamSplitterSpec::new(rng.gen_range(0.0..1.0), 0, 2)?;
        let once = apply_beamsplitter(&s, &bs)?;
        let twice = apply_beamsplitter(&once, &bs)?;
        worst = worst.max(max_abs(&(twice.matrix() - s.matrix())));
        let (p, q) = (s.photon_number_distribution(), once.photon_number_distribution());
        worst = worst.max(p.iter().zip(&q).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max));
        worst = worst.max((once.trace() - 1.0).abs());
    }
    Ok((worst, "trace, photon number, U^2 = 1".into()))
}

fn kraus_check(rng: &mut ChaCha8Rng) -> Result<(f64, String)> {
    let basis = FockBasis::new(2, 5)?;
    let mut worst: f64 = 0.0;
    for _ in 0..10 {
        let eta = rng.gen_range(0.0..1.0);
        let ks = loss_kraus_operators(&basis, 1, eta)?;
        let sum = ks.iter().fold(DMatrix::<C64>::zeros(basis.dim(), basis.dim()), |acc, k| acc + k.adjoint() * k);
        worst = worst.max(max_abs(&(sum - DMatrix::identity(basis.dim(), basis.dim()))));
    }
    Ok((worst, "sum K^dagger K = 1".into()))
}

fn povm_check() -> Result<(f64, String)> {
    let basis = Arc::new(FockBasis::new(2, 5)?);
    let det = DetectorModel::new(DetectorKind::Threshold, 0.83, 1e-4)?;
    let no = pattern_operator(basis.clone(), &[ModeOutcome::NoClick(det), ModeOutcome::Traced])?;
    let yes = pattern_operator(basis.clone(), &[ModeOutcome::Click(det), ModeOutcome::Traced])?;
    let id = Operator::identity(basis);
    let mut worst = max_abs(&(no.sum(&yes)?.matrix() - id.matrix()));
    for ev in no.eigenvalues().into_iter().chain(yes.eigenvalues()) {
        worst = worst.max(-ev).max(ev - 1.0);
    }
    Ok((worst, "click + no click = 1, elements in [0, 1]".into()))
}

fn simulator_check() -> Result<(f64, String)> {
    let basis = Arc::new(FockBasis::new(3, 1)?);
    let mut cases = Vec::new();
    for &x in &SIM_XYZ {
        for &y in &SIM_XYZ {
            for &z in &SIM_XYZ {
                cases.push((x, y, z));
            }
        }
    }
    let mut losses = Vec::new();
    for &t in &SIM_ETA {
        for &fa in &SIM_ETA {
            for &fb in &SIM_ETA {
                for &da in &SIM_ETA {
                    for &db in &SIM_ETA {
                        losses.push(LossBudget::new(t, fa, fb, da, db, 0.0)?);
                    }
                }
            }
        }
    }
    let worst = cases
        .par_iter()
        .map(|&(x, y, z)| -> Result<f64> {
            let p = ProtocolParams::new(x, y, z)?;
            let mut w: f64 = 0.0;
            for l in &losses {
                let a = honest_closed_form(&p, l)?;
                let b = honest_simulated(&p, l, basis.clone())?;
                w = w.max(a.max_deviation(&b));
            }
            Ok(w)
        })
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    Ok((worst, format!("{} parameter points x {} loss budgets", cases.len(), losses.len())))
}

/// Worst eigen-oracle deviation from the closed form, and worst fidelity
/// shortfall of the oracle's eigenvector against the analytic attack state.
pub fn oracle_grid() -> Result<Vec<OraclePoint>> {
    let mut points = Vec::new();
    for &y in &ORACLE_YZ {
        for &z in &ORACLE_YZ {
            for &eta_f in &ORACLE_ETA {
                for &eta_d in &ORACLE_ETA {
                    points.push((y, z, eta_f, eta_d));
                }
            }
        }
    }
    points
        .par_iter()
        .map(|&(y, z, eta_f, eta_d)| oracle_point(y, z, eta_f, eta_d))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OraclePoint {
    pub y: f64,
    pub z: f64,
    pub eta_f: f64,
    pub eta_d: f64,
    pub l_one: usize,
    pub closed_form: f64,
    pub oracle: f64,
    pub fidelity: f64,
}

pub fn oracle_point(y: f64, z: f64, eta_f: f64, eta_d: f64) -> Result<OraclePoint> {
    let params = ProtocolParams::new(0.0, y, z)?;
    let losses = LossBudget {
        eta_f_b: eta_f,
        eta_d_b: eta_d,
        ..LossBudget::lossless()
    };
    let closed = alice_cheat_lossy(&params, &losses)?;
    let basis = Arc::new(FockBasis::new(3, closed.l_one + 2)?);
    let bf = alice_cheat_bruteforce(&params, &losses, basis)?;
    let phi = alice_optimal_amplitudes(&params, &losses, bf.state.basis())?;
    Ok(OraclePoint {
        y,
        z,
        eta_f,
        eta_d,
        l_one: closed.l_one,
        closed_form: closed.probability,
        oracle: bf.probability,
        fidelity: bf.state.fidelity_with_pure(&phi)?,
    })
}

fn oracle_value_check(points: &[OraclePoint]) -> (f64, String) {
    let worst = points.iter().map(|p| (p.oracle - p.closed_form).abs()).fold(0.0, f64::max);
    let bad = points.iter().filter(|p| (p.oracle - p.closed_form).abs() > 1e-9).count();
    (worst, format!("{bad} of {} grid points off", points.len()))
}

fn oracle_fidelity_check(points: &[OraclePoint]) -> (f64, String) {
    let worst = points.iter().map(|p| 1.0 - p.fidelity).fold(0.0, f64::max);
    let bad = points.iter().filter(|p| p.fidelity < 1.0 - 1e-8).count();
    (worst, format!("{bad} of {} grid points below", points.len()))
}

/// The oracle always lies between the lossy closed form and the same
/// closed form without delay-line loss.
fn oracle_bracket_check(points: &[OraclePoint]) -> Result<(f64, String)> {
    let mut worst: f64 = 0.0;
    for p in points {
        let upper = alice_cheat_lossy(
            &ProtocolParams::new(0.0, p.y, p.z)?,
            &LossBudget {
                eta_d_b: p.eta_d,
                ..LossBudget::lossless()
            },
        )?
        .probability;
        worst = worst.max(p.closed_form - p.oracle).max(p.oracle - upper);
    }
    Ok((worst.max(0.0), "closed form <= oracle <= closed form at eta_f = 1".into()))
}

fn detector_kind_check() -> Result<(f64, String)> {
    let basis = Arc::new(FockBasis::new(3, 3)?);
    let mut worst: f64 = 0.0;
    for &y in &ORACLE_YZ {
        for &z in &ORACLE_YZ {
            let p = ProtocolParams::new(0.0, y, z)?;
            let l = LossBudget::lossless();
            let nr = bruteforce_with(&p, &l, basis.clone(), DetectorKind::NumberResolving)?.probability;
            let th = bruteforce_with(&p, &l, basis.clone(), DetectorKind::Threshold)?.probability;
            worst = worst.max((nr - th).abs());
        }
    }
    Ok((worst, "number-resolving vs threshold maximum, lossless".into()))
}

fn vacuum_removal_check(cfg: &VerifyConfig, rng: &mut ChaCha8Rng) -> Result<(f64, String)> {
    let basis = Arc::new(FockBasis::new(3, 3)?);
    let p = ProtocolParams::new(0.0, 0.4, 0.6)?;
    let l = LossBudget::new(1.0, 1.0, 0.9, 1.0, 0.85, 0.0)?;
    let m = alice_win_operator(&p, &l, basis, DetectorKind::Threshold)?;
    let small = m.basis_arc().clone();
    let vac = small.checked_index(&[0, 0])?;
    let mut worst: f64 = 0.0;
    for _ in 0..cfg.samples {
        let mut phi = random_amplitudes(small.dim(), rng);
        phi[vac] = C64::new(0.0, 0.0);
        let without = QuantumState::from_pure(small.clone(), &phi)?.expectation(&m)?;
        let t: f64 = rng.gen_range(0.0..1.0);
        let mut psi: Vec<C64> = phi.iter().map(|a| a * (1.0 - t).sqrt()).collect();
        let n = phi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        psi.iter_mut().for_each(|a| *a /= n);
        psi[vac] = C64::new(t.sqrt(), 0.0);
        let with = QuantumState::from_pure(small.clone(), &psi)?.expectation(&m)?;
        worst = worst.max(with - without);
    }
    Ok((worst.max(0.0), "objective gain from adding |00>".into()))
}

fn fairness_identity_check() -> Result<(f64, String)> {
    let mut worst: f64 = 0.0;
    for i in 0..50 {
        let x = 0.5 * i as f64 / 50.0;
        let d = honest_closed_form(&ProtocolParams::fair_lossless(x)?, &LossBudget::lossless())?;
        worst = worst.max((d.p_alice_wins - 0.5).abs()).max((d.p_bob_wins - 0.5).abs());
    }
    Ok((worst, "x in [0, 1/2)".into()))
}

fn product_law_check() -> Result<(f64, String)> {
    let mut worst: f64 = 0.0;
    for i in 1..=9 {
        let p = ProtocolParams::fair_lossless(0.05 * i as f64)?;
        let prod = alice_cheat_lossless(&p)? * bob_cheat(&p, &LossBudget::lossless())?;
        worst = worst.max((prod - 0.5).abs());
    }
    Ok((worst, "x = 0.05 .. 0.45".into()))
}

fn balanced_bias_check() -> Result<(f64, String)> {
    let x = 1.0 - FRAC_1_SQRT_2;
    let p = ProtocolParams::new(x, fair_y(x)?, 2.0 * x)?;
    let a = alice_cheat_lossless(&p)?;
    let b = bob_cheat(&p, &LossBudget::lossless())?;
    let eps = a.max(b) - 0.5;
    let worst = (a - FRAC_1_SQRT_2).abs().max((b - FRAC_1_SQRT_2).abs()).max((eps - (FRAC_1_SQRT_2 - 0.5)).abs());
    Ok((worst, format!("bias {eps:.10}")))
}

fn loss_never_helps_check() -> Result<(f64, String)> {
    let mut worst: f64 = 0.0;
    for &y in &ORACLE_YZ {
        for &z in &ORACLE_YZ {
            let p = ProtocolParams::new(0.0, y, z)?;
            let free = alice_cheat_lossless(&p)?;
            for &ef in &ORACLE_ETA {
                for &ed in &ORACLE_ETA {
                    let l = LossBudget {
                        eta_f_b: ef,
                        eta_d_b: ed,
                        ..LossBudget::lossless()
                    };
                    worst = worst.max(alice_cheat_lossy(&p, &l)?.probability - free);
                }
            }
        }
    }
    Ok((worst.max(0.0), "lossy minus lossless".into()))
}

/// Honest statistics do not depend on Alice's detector and the abort
/// probability never grows with any efficiency.
fn honest_loss_structure_check() -> Result<(f64, String)> {
    let mut worst: f64 = 0.0;
    for &x in &SIM_XYZ {
        for &y in &SIM_XYZ {
            for &z in &SIM_XYZ {
                let p = ProtocolParams::new(x, y, z)?;
                let base = LossBudget::new(0.8, 0.8, 0.8, 0.8, 0.8, 0.0)?;
                let other = LossBudget { eta_d_a: 0.3, ..base };
                worst = worst.max(honest_closed_form(&p, &base)?.max_deviation(&honest_closed_form(&p, &other)?));
                let ab = |l: &LossBudget| honest_closed_form(&p, l).map(|d| d.p_abort);
                let a0 = ab(&base)?;
                for bumped in [
                    LossBudget { eta_t: 0.9, ..base },
                    LossBudget { eta_f_a: 0.9, ..base },
                    LossBudget { eta_f_b: 0.9, ..base },
                    LossBudget { eta_d_b: 0.9, ..base },
                ] {
                    worst = worst.max(ab(&bumped)? - a0);
                }
            }
        }
    }
    Ok((worst.max(0.0), "eta_d_a independence, abort monotone".into()))
}

fn scf_check() -> Result<(f64, String)> {
    let r = scf_solve()?;
    let worst = [(r.x - 0.38).abs(), (r.y - 0.31).abs(), (r.z - 0.66).abs(), 2.0 * (r.bias - 0.31).abs()]
        .into_iter()
        .fold(0.0, f64::max);
    Ok((worst, format!("x {:.4} y {:.4} z {:.4} bias {:.4}", r.x, r.y, r.z, r.bias)))
}

fn solver_points() -> Result<Vec<(LossBudget, SolveResult)>> {
    let lossless = LossBudget::lossless();
    let mut out = vec![(lossless, solve_fair_balanced(2.0 * (1.0 - FRAC_1_SQRT_2), &lossless)?)];
    for (eta_d, z) in [(0.95, 0.57), (0.90, 0.63)] {
        for i in 0..=10 {
            let losses = link_budget(&LinkModel::at(0.2 * i as f64), eta_d, eta_d)?;
            out.push((losses, solve_fair_balanced(z, &losses)?));
        }
    }
    Ok(out)
}

fn solver_check() -> Result<(f64, String)> {
    let points = solver_points()?;
    let mut worst: f64 = 0.0;
    let mut disagreements = 0;
    for (losses, r) in &points {
        let p = ProtocolParams::new(r.x, r.y, r.z)?;
        let honest = honest_closed_form(&p, losses)?;
        let p_d_alice = alice_cheat_lossy(&p, losses)?.probability;
        worst = worst
            .max((honest.p_alice_wins - honest.p_bob_wins).abs())
            .max((p_d_alice - bob_cheat(&p, losses)?).abs())
            .max((r.p_d_classical - classical_cheat(r.p_ab)).abs());
        if !r.reduced_test_agrees() {
            disagreements += 1;
        }
    }
    if disagreements > 0 {
        worst = f64::INFINITY;
    }
    Ok((worst, format!("{} solved points, {disagreements} reduced/full disagreements", points.len())))
}

fn lose_limit_check() -> Result<(f64, String)> {
    let (y, eta) = (1.0 / 3.0, 0.95);
    let mut worst: f64 = 0.0;
    for n in 1..=6usize {
        let basis = Arc::new(FockBasis::new(2, n)?);
        let s = apply_beamsplitter(&prepare_fock(basis, &[n, 0])?, &BeamSplitterSpec::new(y, 0, 1)?)?;
        let det = DetectorModel::threshold(eta)?;
        let sim = outcome_probability(&s, &[ModeOutcome::Traced, ModeOutcome::Click(det)])?;
        worst = worst.max((sim - classical_lose_limit(y, eta, n as u32)?).abs());
    }
    let mut prev = 0.0;
    for n in 1..=400 {
        let v = classical_lose_limit(y, eta, n)?;
        if v <= prev && v < 1.0 {
            worst = f64::INFINITY;
        }
        prev = v;
    }
    if prev <= 1.0 - 1e-6 {
        worst = f64::INFINITY;
    }
    Ok((worst, "fock simulation n <= 6, monotone, limit 1".into()))
}

/// Dense lift of a beam splitter is unitary.
fn lift_check() -> Result<(f64, String)> {
    let basis = FockBasis::new(3, 4)?;
    let h = BeamSplitterSpec::new(0.37, 0, 2)?.matrix().map(|row| row.map(C64::from));
    let u = two_mode_unitary(&basis, 0, 2, h)?;
    let d = basis.dim();
    Ok((max_abs(&(u.adjoint() * &u - DMatrix::identity(d, d))), "U^dagger U = 1".into()))
}

/// Runs every check.
pub fn run_all(cfg: &VerifyConfig) -> VerifyReport {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut checks = vec![
        Check::from_result("balanced_lossless_bias", 1e-12, balanced_bias_check()),
        Check::from_result("fairness_identity", 1e-12, fairness_identity_check()),
        Check::from_result("product_law", 1e-12, product_law_check()),
        Check::from_result("loss_never_helps_alice", 0.0, loss_never_helps_check()),
        Check::from_result("honest_loss_structure", 1e-15, honest_loss_structure_check()),
        Check::from_result("simulator_matches_closed_form", 1e-10, simulator_check()),
        Check::from_result("trace_identity", 1e-10, trace_identity_check(cfg, &mut rng)),
        Check::from_result("loss_commutes_with_beamsplitter", 1e-10, loss_commutation_check(cfg, &mut rng)),
        Check::from_result("beamsplitter_unitarity", 1e-10, unitary_check(cfg, &mut rng)),
        Check::from_result("lift_unitarity", 1e-12, lift_check()),
        Check::from_result("kraus_completeness", 1e-12, kraus_check(&mut rng)),
        Check::from_result("povm_completeness", 1e-12, povm_check()),
        Check::from_result("detector_kind_equivalence", 1e-9, detector_kind_check()),
        Check::from_result("vacuum_removal", 1e-12, vacuum_removal_check(cfg, &mut rng)),
    ];
    match oracle_grid() {
        Ok(points) => {
            let (w, d) = oracle_value_check(&points);
            checks.push(Check::within("oracle_equivalence", w, 1e-9, d));
            let (w, d) = oracle_fidelity_check(&points);
            checks.push(Check::within("oracle_state_fidelity", w, 1e-8, d));
            checks.push(Check::from_result("oracle_bracket", 1e-9, oracle_bracket_check(&points)));
        }
        Err(e) => checks.push(Check::from_result("oracle_equivalence", 1e-9, Err(e))),
    }
    checks.extend([
        Check::from_result("scf_reproduction", 0.01, scf_check()),
        Check::from_result("solver_invariants", 1e-10, solver_check()),
        Check::from_result("lose_limit", 1e-10, lose_limit_check()),
    ]);
    VerifyReport { seed: cfg.seed, checks }
}
