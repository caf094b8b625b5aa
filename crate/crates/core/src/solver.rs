//! Fair and balanced operating points over a fiber link.
//!
//! For a fixed `z` the solver alternates the fairness condition (solve for
//! `y`) and the balance condition (solve for `x`) until `x` settles, then
//! compares the resulting cheating probability with the best classical
//! protocol that has the same abort rate.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::adversary::{alice_cheat_lossy, bob_cheat};
use crate::error::{Error, Result};
use crate::protocol::{honest_closed_form, LossBudget, ProtocolParams};

/// Fiber link between the parties.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinkModel {
    #[serde(default)]
    pub distance_km: f64,
    #[serde(default = "default_attenuation")]
    pub attenuation_db_per_km: f64,
    /// Optical switching time; sets the length of Bob's delay line.
    #[serde(default = "default_switch_time")]
    pub switch_time_ns: f64,
    #[serde(default = "default_group_velocity")]
    pub group_velocity_km_per_s: f64,
}

fn default_attenuation() -> f64 {
    0.2
}

fn default_switch_time() -> f64 {
    500.0
}

fn default_group_velocity() -> f64 {
    2.0e5
}

impl Default for LinkModel {
    fn default() -> Self {
        Self::at(0.0)
    }
}

impl LinkModel {
    /// Default fiber at `distance_km`.
    pub fn at(distance_km: f64) -> Self {
        Self {
            distance_km,
            attenuation_db_per_km: default_attenuation(),
            switch_time_ns: default_switch_time(),
            group_velocity_km_per_s: default_group_velocity(),
        }
    }

    pub fn with_distance(&self, distance_km: f64) -> Self {
        Self { distance_km, ..*self }
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("distance_km", self.distance_km),
            ("attenuation_db_per_km", self.attenuation_db_per_km),
            ("switch_time_ns", self.switch_time_ns),
            ("group_velocity_km_per_s", self.group_velocity_km_per_s),
        ];
        for (name, value) in fields {
            if !(value >= 0.0 && value.is_finite()) {
                return Err(Error::ParameterOutOfRange {
                    name,
                    value,
                    lo: 0.0,
                    hi: f64::INFINITY,
                });
            }
        }
        Ok(())
    }

    /// Length of fiber in the delay line, km.
    pub fn switch_length_km(&self) -> f64 {
        self.switch_time_ns * 1e-9 * self.group_velocity_km_per_s
    }

    pub fn eta_t(&self) -> f64 {
        db_to_transmission(self.attenuation_db_per_km * self.distance_km)
    }

    pub fn eta_s(&self) -> f64 {
        db_to_transmission(self.attenuation_db_per_km * self.switch_length_km())
    }

    /// Storage efficiency of either party: delay line plus a round trip.
    pub fn eta_f(&self) -> f64 {
        let t = self.eta_t();
        self.eta_s() * t * t
    }
}

fn db_to_transmission(db: f64) -> f64 {
    10f64.powf(-db / 10.0)
}

/// Loss budget of a link with the given detector efficiencies.
pub fn link_budget(link: &LinkModel, eta_d_a: f64, eta_d_b: f64) -> Result<LossBudget> {
    link.validate()?;
    let eta_f = link.eta_f();
    LossBudget::new(link.eta_t(), eta_f, eta_f, eta_d_a, eta_d_b, 0.0)
}

/// Largest `z` for which [`fairness_y`] has a real solution.
pub fn fairness_z_bound(x: f64, losses: &LossBudget) -> f64 {
    (1.0 - x) * (1.0 + losses.eta_f_b) / (x * losses.eta_f_a + (1.0 - x) * losses.eta_f_b)
}

/// The `y` that makes the honest protocol fair for given `x`, `z`.
///
/// Closed-form root of the fairness condition in `sqrt(y)`; the result is
/// always checked against [`honest_closed_form`].
pub fn fairness_y(x: f64, z: f64, losses: &LossBudget) -> Result<f64> {
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::XOutOfUnitInterval(x));
    }
    let (efa, efb) = (losses.eta_f_a, losses.eta_f_b);
    let k = (1.0 - z) * efb + 1.0;
    let inner = (1.0 - x) * k - x * z * efa;
    if inner < 0.0 {
        return Err(Error::NoFairParameter {
            x,
            z,
            bound: fairness_z_bound(x, losses),
        });
    }
    let root = inner.sqrt() - (x * z * (1.0 - z) * efa * efb).sqrt();
    let y = root * root / ((1.0 - x) * k * k);
    if root < 0.0 {
        return Err(Error::NegativeFairRoot { x, z, root });
    }
    if !(0.0..=1.0).contains(&y) {
        return Err(Error::YOutOfUnitInterval(y));
    }
    let honest = honest_closed_form(&ProtocolParams::new(x, y, z)?, losses)?;
    let residual = (honest.p_alice_wins - honest.p_bob_wins).abs();
    if residual > 1e-12 {
        return Err(Error::FairnessResidual(residual));
    }
    Ok(y)
}

/// The `x` that equalizes Bob's cheating probability with Alice's lossy one.
pub fn balance_x(y: f64, z: f64, losses: &LossBudget) -> Result<f64> {
    // x does not enter Alice's bound
    let p_d_alice = alice_cheat_lossy(&ProtocolParams::new(0.0, y, z)?, losses)?.probability;
    let denom = losses.eta_f_a * losses.eta_d_a;
    if denom <= 0.0 {
        return Err(Error::DegenerateDenominator("eta_f_a * eta_d_a"));
    }
    let x = (1.0 - p_d_alice) / denom;
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::XOutOfUnitInterval(x));
    }
    Ok(x)
}

/// Fair and balanced operating point with its classical comparison.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SolveResult {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub p_h: f64,
    pub p_ab: f64,
    pub p_d_quantum: f64,
    pub p_d_classical: f64,
    pub l_one: usize,
    pub advantage: bool,
    pub converged: bool,
    pub iterations: usize,
    /// Honest winning probabilities and cheating probabilities per party.
    pub p_h_alice: f64,
    pub p_h_bob: f64,
    pub p_d_alice: f64,
    pub p_d_bob: f64,
    /// No classical protocol meets all three of `P_h^A <= P_d^A`,
    /// `P_h^B <= P_d^B`, `P_ab >= (1 - P_d^A)(1 - P_d^B)`.
    pub full_system_advantage: bool,
}

impl SolveResult {
    pub fn reduced_test_agrees(&self) -> bool {
        self.advantage == self.full_system_advantage
    }
}

/// Smallest cheating probability of a classical protocol with abort
/// probability `p_ab`.
pub fn classical_cheat(p_ab: f64) -> f64 {
    1.0 - p_ab.max(0.0).sqrt()
}

/// Whether a classical protocol can reach these honest and cheating
/// probabilities.
pub fn classically_feasible(p_h_alice: f64, p_h_bob: f64, p_d_alice: f64, p_d_bob: f64) -> bool {
    let p_ab = 1.0 - p_h_alice - p_h_bob;
    p_h_alice <= p_d_alice && p_h_bob <= p_d_bob && p_ab >= (1.0 - p_d_alice) * (1.0 - p_d_bob)
}

pub const SOLVE_TOLERANCE: f64 = 1e-12;
pub const SOLVE_MAX_ITERATIONS: usize = 10_000;

/// Fixed-point iteration `x <- balance_x(fairness_y(x, z), z)` from
/// `x = 1 - 1/sqrt(2)`, halving any step longer than the previous one.
pub fn solve_fair_balanced(z: f64, losses: &LossBudget) -> Result<SolveResult> {
    losses.validate()?;
    let step = |x: f64| -> Result<f64> { balance_x(fairness_y(x, z, losses)?, z, losses) };

    let mut x = 1.0 - std::f64::consts::FRAC_1_SQRT_2;
    let mut last = f64::INFINITY;
    let mut iterations = 0;
    let mut converged = false;
    while iterations < SOLVE_MAX_ITERATIONS {
        let mut next = step(x)?;
        let mut delta = (next - x).abs();
        if delta > last {
            next = x + 0.5 * (next - x);
            delta *= 0.5;
        }
        x = next;
        iterations += 1;
        if delta <= SOLVE_TOLERANCE {
            converged = true;
            break;
        }
        last = delta;
    }
    if !converged {
        return Err(Error::NoConvergence {
            iterations,
            last_step: last,
        });
    }
    evaluate(x, z, losses, iterations)
}

/// Probabilities of the fair point at `x`, recomputed from the protocol and
/// adversary closed forms.
fn evaluate(x: f64, z: f64, losses: &LossBudget, iterations: usize) -> Result<SolveResult> {
    let y = fairness_y(x, z, losses)?;
    let params = ProtocolParams::new(x, y, z)?;
    let honest = honest_closed_form(&params, losses)?;
    let alice = alice_cheat_lossy(&params, losses)?;
    let p_d_bob = bob_cheat(&params, losses)?;
    let p_d_quantum = alice.probability.max(p_d_bob);
    let p_ab = honest.p_abort.max(0.0);
    let p_d_classical = classical_cheat(p_ab);
    Ok(SolveResult {
        x,
        y,
        z,
        p_h: honest.p_alice_wins,
        p_ab,
        p_d_quantum,
        p_d_classical,
        l_one: alice.l_one,
        advantage: p_d_quantum < p_d_classical,
        converged: true,
        iterations,
        p_h_alice: honest.p_alice_wins,
        p_h_bob: honest.p_bob_wins,
        p_d_alice: alice.probability,
        p_d_bob,
        full_system_advantage: !classically_feasible(
            honest.p_alice_wins,
            honest.p_bob_wins,
            alice.probability,
            p_d_bob,
        ),
    })
}

/// One distance of a sweep; failed rows keep their error.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub d_km: f64,
    pub outcome: Result<SolveResult>,
}

fn check_distances(d_values: &[f64]) -> Result<()> {
    if d_values.is_empty() {
        return Err(Error::InvalidSweep("no distances".into()));
    }
    if let Some(d) = d_values.iter().find(|d| !(**d >= 0.0 && d.is_finite())) {
        return Err(Error::InvalidSweep(format!("distance {d} is not a finite non-negative number")));
    }
    if d_values.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidSweep("distances must be strictly ascending".into()));
    }
    Ok(())
}

/// Solves every distance on the default link, both detectors at
/// `detector_eff`.
pub fn sweep(d_values: &[f64], z: f64, detector_eff: f64) -> Result<Vec<SweepRow>> {
    sweep_link(&LinkModel::default(), d_values, z, detector_eff, detector_eff)
}

/// Like [`sweep`] on a custom link; `base.distance_km` is ignored.
pub fn sweep_link(
    base: &LinkModel,
    d_values: &[f64],
    z: f64,
    eta_d_a: f64,
    eta_d_b: f64,
) -> Result<Vec<SweepRow>> {
    check_distances(d_values)?;
    base.validate()?;
    Ok(d_values
        .par_iter()
        .map(|&d_km| SweepRow {
            d_km,
            outcome: link_budget(&base.with_distance(d_km), eta_d_a, eta_d_b)
                .and_then(|losses| solve_fair_balanced(z, &losses)),
        })
        .collect())
}

/// First sweep row without advantage that follows a row with advantage,
/// as `(last distance with advantage, first without)`.
pub fn crossover_bracket(rows: &[SweepRow]) -> Option<(f64, f64)> {
    rows.windows(2).find_map(|w| match (&w[0].outcome, &w[1].outcome) {
        (Ok(a), Ok(b)) if a.advantage && !b.advantage => Some((w[0].d_km, w[1].d_km)),
        _ => None,
    })
}

/// Distance where `P_d^Q = P_d^C`, by bisection inside a bracket where
/// the advantage flag flips.
pub fn crossover_distance(
    base: &LinkModel,
    z: f64,
    eta_d_a: f64,
    eta_d_b: f64,
    bracket: (f64, f64),
    tol_km: f64,
) -> Result<f64> {
    let has_advantage =
        |d: f64| -> Result<bool> { Ok(solve_fair_balanced(z, &link_budget(&base.with_distance(d), eta_d_a, eta_d_b)?)?.advantage) };
    let (mut lo, mut hi) = bracket;
    if !has_advantage(lo)? || has_advantage(hi)? {
        return Err(Error::InvalidSweep(format!("advantage does not flip on [{lo}, {hi}] km")));
    }
    while hi - lo > tol_km {
        let mid = 0.5 * (lo + hi);
        if has_advantage(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Convenience scan, not part of the protocol analysis: crossover distance
/// for each `z` found on the grid `d_values` (`None` if there is no
/// advantage at the first distance or no flip on the grid).
pub fn scan_z_crossover(
    base: &LinkModel,
    z_values: &[f64],
    d_values: &[f64],
    eta_d: f64,
) -> Result<Vec<(f64, Option<f64>)>> {
    check_distances(d_values)?;
    z_values
        .iter()
        .map(|&z| {
            let rows = sweep_link(base, d_values, z, eta_d, eta_d)?;
            let crossing = crossover_bracket(&rows)
                .map(|b| crossover_distance(base, z, eta_d, eta_d, b, 1e-4))
                .transpose()
                .ok()
                .flatten();
            Ok((z, crossing))
        })
        .collect()
}
