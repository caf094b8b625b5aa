use std::sync::Arc;

use nalgebra::DMatrix;

use super::basis::FockBasis;
use super::state::{Operator, QuantumState, C64};
use super::{binomial, factorial};
use crate::error::{check_efficiency, check_unit, Error, Result};

/// Beam splitter of reflectivity `r` on an ordered pair of modes.
///
/// Acts on the creation operators of modes `(k, l)` through
/// `[[sqrt(r), sqrt(1-r)], [sqrt(1-r), -sqrt(r)]]`, a real symmetric
/// orthogonal matrix, so the splitter is its own inverse.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamSplitterSpec {
    reflectivity: f64,
    modes: (usize, usize),
}

impl BeamSplitterSpec {
    pub fn new(reflectivity: f64, k: usize, l: usize) -> Result<Self> {
        check_unit("reflectivity", reflectivity)?;
        if k == l {
            return Err(Error::RepeatedMode(k));
        }
        Ok(Self {
            reflectivity,
            modes: (k, l),
        })
    }

    pub fn reflectivity(&self) -> f64 {
        self.reflectivity
    }

    pub fn modes(&self) -> (usize, usize) {
        self.modes
    }

    /// Single-photon transfer matrix.
    pub fn matrix(&self) -> [[f64; 2]; 2] {
        let r = self.reflectivity.sqrt();
        let t = (1.0 - self.reflectivity).sqrt();
        [[r, t], [t, -r]]
    }

    fn check(&self, basis: &FockBasis) -> Result<()> {
        basis.check_mode(self.modes.0)?;
        basis.check_mode(self.modes.1)
    }
}

/// Pure Fock state `|n_1 ... n_m>`.
pub fn prepare_fock(basis: Arc<FockBasis>, occupations: &[usize]) -> Result<QuantumState> {
    let idx = basis.checked_index(occupations)?;
    let d = basis.dim();
    let mut m = DMatrix::zeros(d, d);
    m[(idx, idx)] = C64::new(1.0, 0.0);
    Ok(QuantumState::from_parts(basis, m))
}

/// Fock-space lift of a 2x2 mode transformation `h`, where
/// `U a_k^dag U^dag = h[0][0] a_k^dag + h[0][1] a_l^dag` and
/// `U a_l^dag U^dag = h[1][0] a_k^dag + h[1][1] a_l^dag`.
pub fn two_mode_unitary(basis: &FockBasis, k: usize, l: usize, h: [[C64; 2]; 2]) -> Result<DMatrix<C64>> {
    basis.check_mode(k)?;
    basis.check_mode(l)?;
    if k == l {
        return Err(Error::RepeatedMode(k));
    }
    let d = basis.dim();
    let mut u = DMatrix::zeros(d, d);
    let mut target = vec![0usize; basis.mode_count()];
    for col in 0..d {
        let occ = basis.occupations(col);
        let (p, q) = (occ[k], occ[l]);
        let norm = 1.0 / (factorial(p) * factorial(q)).sqrt();
        target.copy_from_slice(occ);
        for i in 0..=p {
            let a = h[0][0].powu(i as u32) * h[0][1].powu((p - i) as u32) * binomial(p, i);
            for j in 0..=q {
                let b = h[1][0].powu(j as u32) * h[1][1].powu((q - j) as u32) * binomial(q, j);
                let nk = i + j;
                let nl = p + q - nk;
                target[k] = nk;
                target[l] = nl;
                let row = basis.index_of(&target).expect("photon number is conserved");
                u[(row, col)] += a * b * (norm * (factorial(nk) * factorial(nl)).sqrt());
            }
        }
    }
    Ok(u)
}

fn beamsplitter_unitary(basis: &FockBasis, bs: &BeamSplitterSpec) -> Result<DMatrix<C64>> {
    bs.check(basis)?;
    let h = bs.matrix().map(|row| row.map(C64::from));
    two_mode_unitary(basis, bs.modes.0, bs.modes.1, h)
}

/// `rho -> U rho U^dagger` for the beam splitter `bs`.
pub fn apply_beamsplitter(state: &QuantumState, bs: &BeamSplitterSpec) -> Result<QuantumState> {
    let u = beamsplitter_unitary(state.basis(), bs)?;
    let m = &u * state.matrix() * u.adjoint();
    Ok(QuantumState::from_parts(state.basis_arc().clone(), m))
}

fn phase_factors(basis: &FockBasis, mode: usize, phase: f64) -> Vec<C64> {
    basis
        .iter()
        .map(|occ| C64::from_polar(1.0, phase * occ[mode] as f64))
        .collect()
}

/// Phase shift `|n> -> e^{i phase n} |n>` on one mode.
pub fn apply_phase(state: &QuantumState, mode: usize, phase: f64) -> Result<QuantumState> {
    state.basis().check_mode(mode)?;
    let f = phase_factors(state.basis(), mode, phase);
    let m = DMatrix::from_fn(f.len(), f.len(), |i, j| f[i] * state.matrix()[(i, j)] * f[j].conj());
    Ok(QuantumState::from_parts(state.basis_arc().clone(), m))
}

/// One Kraus operator of the loss channel in sparse form: column `c` is sent
/// to row `target[c]` with weight `weight[c]` (absent when fewer than `k`
/// photons are present).
struct LossKraus {
    entries: Vec<Option<(usize, f64)>>,
}

fn loss_kraus_sparse(basis: &FockBasis, mode: usize, eta: f64) -> Vec<LossKraus> {
    let mut out = Vec::with_capacity(basis.max_total_photons() + 1);
    let mut lowered = vec![0usize; basis.mode_count()];
    for lost in 0..=basis.max_total_photons() {
        let entries = basis
            .iter()
            .map(|occ| {
                let n = occ[mode];
                if n < lost {
                    return None;
                }
                let w = binomial(n, lost) * eta.powi((n - lost) as i32) * (1.0 - eta).powi(lost as i32);
                if w == 0.0 {
                    return None;
                }
                lowered.copy_from_slice(occ);
                lowered[mode] = n - lost;
                Some((basis.index_of(&lowered).expect("lowering stays in basis"), w.sqrt()))
            })
            .collect();
        out.push(LossKraus { entries });
    }
    out
}

/// Dense Kraus operators `K_k = sum_n sqrt(C(n,k) eta^(n-k) (1-eta)^k) |n-k><n|`
/// of the pure-loss channel on `mode`.
pub fn loss_kraus_operators(basis: &FockBasis, mode: usize, efficiency: f64) -> Result<Vec<DMatrix<C64>>> {
    basis.check_mode(mode)?;
    check_efficiency(efficiency)?;
    let d = basis.dim();
    Ok(loss_kraus_sparse(basis, mode, efficiency)
        .into_iter()
        .map(|k| {
            let mut m = DMatrix::zeros(d, d);
            for (col, e) in k.entries.iter().enumerate() {
                if let Some((row, w)) = *e {
                    m[(row, col)] = C64::from(w);
                }
            }
            m
        })
        .collect())
}

/// Photon loss of transmission `efficiency` on one mode.
pub fn apply_loss(state: &QuantumState, mode: usize, efficiency: f64) -> Result<QuantumState> {
    let basis = state.basis();
    basis.check_mode(mode)?;
    check_efficiency(efficiency)?;
    if efficiency == 1.0 {
        return Ok(state.clone());
    }
    let d = basis.dim();
    let rho = state.matrix();
    let mut out = DMatrix::zeros(d, d);
    for k in loss_kraus_sparse(basis, mode, efficiency) {
        for (b, eb) in k.entries.iter().enumerate() {
            let Some((tb, wb)) = *eb else { continue };
            for (a, ea) in k.entries.iter().enumerate() {
                let Some((ta, wa)) = *ea else { continue };
                out[(ta, tb)] += rho[(a, b)] * (wa * wb);
            }
        }
    }
    Ok(QuantumState::from_parts(state.basis_arc().clone(), out))
}

impl Operator {
    /// Heisenberg picture of a beam splitter: `E -> U^dagger E U`.
    pub fn heisenberg_beamsplitter(&self, bs: &BeamSplitterSpec) -> Result<Self> {
        let u = beamsplitter_unitary(&self.basis, bs)?;
        Ok(Self {
            basis: self.basis.clone(),
            matrix: u.adjoint() * &self.matrix * &u,
        })
    }

    /// Heisenberg picture of a phase shift.
    pub fn heisenberg_phase(&self, mode: usize, phase: f64) -> Result<Self> {
        self.basis.check_mode(mode)?;
        let f = phase_factors(&self.basis, mode, phase);
        let matrix = DMatrix::from_fn(f.len(), f.len(), |i, j| f[i].conj() * self.matrix[(i, j)] * f[j]);
        Ok(Self {
            basis: self.basis.clone(),
            matrix,
        })
    }

    /// Heisenberg picture of photon loss: `E -> sum_k K_k^dagger E K_k`.
    pub fn heisenberg_loss(&self, mode: usize, efficiency: f64) -> Result<Self> {
        self.basis.check_mode(mode)?;
        check_efficiency(efficiency)?;
        if efficiency == 1.0 {
            return Ok(self.clone());
        }
        let d = self.basis.dim();
        let mut out = DMatrix::zeros(d, d);
        for k in loss_kraus_sparse(&self.basis, mode, efficiency) {
            for (b, eb) in k.entries.iter().enumerate() {
                let Some((tb, wb)) = *eb else { continue };
                for (a, ea) in k.entries.iter().enumerate() {
                    let Some((ta, wa)) = *ea else { continue };
                    out[(a, b)] += self.matrix[(ta, tb)] * (wa * wb);
                }
            }
        }
        Ok(Self {
            basis: self.basis.clone(),
            matrix: out,
        })
    }
}
