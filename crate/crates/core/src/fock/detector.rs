use std::sync::Arc;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::basis::FockBasis;
use super::binomial;
use super::state::{Operator, QuantumState};
use crate::error::{check_efficiency, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DetectorKind {
    Threshold,
    NumberResolving,
}

/// Single-photon detector with efficiency `efficiency` and, for threshold
/// detectors only, a dark-count probability.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectorModel {
    kind: DetectorKind,
    efficiency: f64,
    dark_count: f64,
}

impl DetectorModel {
    pub fn new(kind: DetectorKind, efficiency: f64, dark_count: f64) -> Result<Self> {
        check_efficiency(efficiency)?;
        if !(0.0..1.0).contains(&dark_count) {
            return Err(Error::ParameterOutOfRange {
                name: "dark_count",
                value: dark_count,
                lo: 0.0,
                hi: 1.0,
            });
        }
        if kind == DetectorKind::NumberResolving && dark_count > 0.0 {
            return Err(Error::UnsupportedDetector(
                "dark counts are only modelled for threshold detectors",
            ));
        }
        Ok(Self {
            kind,
            efficiency,
            dark_count,
        })
    }

    pub fn threshold(efficiency: f64) -> Result<Self> {
        Self::new(DetectorKind::Threshold, efficiency, 0.0)
    }

    pub fn number_resolving(efficiency: f64) -> Result<Self> {
        Self::new(DetectorKind::NumberResolving, efficiency, 0.0)
    }

    pub fn perfect_threshold() -> Self {
        Self {
            kind: DetectorKind::Threshold,
            efficiency: 1.0,
            dark_count: 0.0,
        }
    }

    pub fn kind(&self) -> DetectorKind {
        self.kind
    }

    pub fn efficiency(&self) -> f64 {
        self.efficiency
    }

    pub fn dark_count(&self) -> f64 {
        self.dark_count
    }

    /// Probability of no click given `n` photons on the detector.
    pub fn no_click_weight(&self, n: usize) -> f64 {
        (1.0 - self.dark_count) * (1.0 - self.efficiency).powi(n as i32)
    }

    /// Probability of registering exactly `k` photons given `n` incident.
    fn count_weight(&self, k: usize, n: usize) -> f64 {
        if n < k {
            return 0.0;
        }
        let eta = self.efficiency;
        binomial(n, k) * eta.powi(k as i32) * (1.0 - eta).powi((n - k) as i32)
    }
}

/// What is recorded on one mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ModeOutcome {
    /// Mode is not measured; it is traced out.
    Traced,
    NoClick(DetectorModel),
    Click(DetectorModel),
    /// Exactly this many photons, number-resolving detectors only.
    Count(usize, DetectorModel),
}

impl ModeOutcome {
    fn weight(&self, n: usize) -> Result<f64> {
        Ok(match self {
            ModeOutcome::Traced => 1.0,
            ModeOutcome::NoClick(d) => d.no_click_weight(n),
            ModeOutcome::Click(d) => 1.0 - d.no_click_weight(n),
            ModeOutcome::Count(k, d) => {
                if d.kind != DetectorKind::NumberResolving {
                    return Err(Error::UnsupportedDetector(
                        "exact photon counts need a number-resolving detector",
                    ));
                }
                d.count_weight(*k, n)
            }
        })
    }
}

/// Diagonal weights of the product POVM element for `pattern`.
pub fn pattern_weights(basis: &FockBasis, pattern: &[ModeOutcome]) -> Result<Vec<f64>> {
    if pattern.len() != basis.mode_count() {
        return Err(Error::PatternModeMismatch {
            expected: basis.mode_count(),
            got: pattern.len(),
        });
    }
    basis
        .iter()
        .map(|occ| {
            occ.iter()
                .zip(pattern)
                .try_fold(1.0, |acc, (&n, outcome)| Ok(acc * outcome.weight(n)?))
        })
        .collect()
}

/// POVM element of the whole pattern as an operator.
pub fn pattern_operator(basis: Arc<FockBasis>, pattern: &[ModeOutcome]) -> Result<Operator> {
    let w = pattern_weights(&basis, pattern)?;
    Operator::diagonal(basis, &w)
}

/// No-click element `(1 - p_dc) sum_n (1 - eta)^n |n><n|` on `mode`, identity
/// on the other modes.
pub fn povm_no_click(basis: Arc<FockBasis>, mode: usize, det: &DetectorModel) -> Result<Operator> {
    basis.check_mode(mode)?;
    let mut pattern = vec![ModeOutcome::Traced; basis.mode_count()];
    pattern[mode] = ModeOutcome::NoClick(*det);
    pattern_operator(basis, &pattern)
}

/// `Tr[rho Pi_pattern]`.
pub fn outcome_probability(state: &QuantumState, pattern: &[ModeOutcome]) -> Result<f64> {
    let w = pattern_weights(state.basis(), pattern)?;
    Ok(state
        .matrix()
        .diagonal()
        .iter()
        .zip(&w)
        .map(|(rho, w)| rho.re * w)
        .sum())
}

/// Result of conditioning a state on a measurement pattern.
#[derive(Debug, Clone)]
pub struct Conditioned {
    pub probability: f64,
    /// Normalized post-measurement state, `None` when the outcome is
    /// impossible.
    pub state: Option<QuantumState>,
}

/// Conditions `state` on `pattern` with the Lueders rule
/// `sqrt(Pi) rho sqrt(Pi) / p`.
pub fn condition(state: &QuantumState, pattern: &[ModeOutcome]) -> Result<Conditioned> {
    let w = pattern_weights(state.basis(), pattern)?;
    let s: Vec<f64> = w.iter().map(|x| x.max(0.0).sqrt()).collect();
    let rho = state.matrix();
    let post = DMatrix::from_fn(rho.nrows(), rho.ncols(), |i, j| rho[(i, j)] * (s[i] * s[j]));
    let probability: f64 = post.diagonal().iter().map(|z| z.re).sum();
    let state = if probability > 0.0 {
        Some(QuantumState::from_parts(
            state.basis_arc().clone(),
            post.map(|z| z / probability),
        ))
    } else {
        None
    };
    Ok(Conditioned { probability, state })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::prepare_fock;
    use approx::assert_abs_diff_eq;

    fn basis(modes: usize, cap: usize) -> Arc<FockBasis> {
        Arc::new(FockBasis::new(modes, cap).unwrap())
    }

    #[test]
    fn perfect_detector_no_click_is_vacuum_projector() {
        let b = basis(2, 3);
        let op = povm_no_click(b.clone(), 0, &DetectorModel::perfect_threshold()).unwrap();
        for (i, occ) in b.iter().enumerate() {
            let expect = if occ[0] == 0 { 1.0 } else { 0.0 };
            assert_eq!(op.matrix()[(i, i)].re, expect);
        }
    }

    #[test]
    fn blind_detector_no_click_is_identity() {
        let b = basis(2, 3);
        let op = povm_no_click(b.clone(), 1, &DetectorModel::threshold(0.0).unwrap()).unwrap();
        assert_eq!(op, Operator::identity(b));
    }

    #[test]
    fn single_photon_no_click_probability() {
        let eta = 0.87;
        let s = prepare_fock(basis(1, 2), &[1]).unwrap();
        let p = outcome_probability(&s, &[ModeOutcome::NoClick(DetectorModel::threshold(eta).unwrap())]).unwrap();
        assert_abs_diff_eq!(p, 1.0 - eta, epsilon = 1e-15);
    }

    #[test]
    fn click_on_n_photons() {
        let eta = 0.4;
        let det = DetectorModel::threshold(eta).unwrap();
        let perfect = DetectorModel::perfect_threshold();
        for n in 0..=5 {
            let s = prepare_fock(basis(3, 5), &[n, 0, 0]).unwrap();
            let p = outcome_probability(
                &s,
                &[ModeOutcome::Click(det), ModeOutcome::NoClick(perfect), ModeOutcome::NoClick(perfect)],
            )
            .unwrap();
            assert_abs_diff_eq!(p, 1.0 - (1.0 - eta).powi(n as i32), epsilon = 1e-15);
        }
        let s = prepare_fock(basis(3, 3), &[1, 0, 0]).unwrap();
        let p = outcome_probability(
            &s,
            &[ModeOutcome::Click(perfect), ModeOutcome::NoClick(perfect), ModeOutcome::NoClick(perfect)],
        )
        .unwrap();
        assert_eq!(p, 1.0);
    }

    #[test]
    fn pattern_length_must_match() {
        let s = prepare_fock(basis(2, 1), &[1, 0]).unwrap();
        assert_eq!(
            outcome_probability(&s, &[ModeOutcome::Traced]).unwrap_err(),
            Error::PatternModeMismatch { expected: 2, got: 1 }
        );
    }

    #[test]
    fn povm_elements_are_complete() {
        let b = basis(2, 6);
        let det = DetectorModel::new(DetectorKind::Threshold, 0.73, 1e-3).unwrap();
        let no = povm_no_click(b.clone(), 0, &det).unwrap();
        let click = pattern_operator(b.clone(), &[ModeOutcome::Click(det), ModeOutcome::Traced]).unwrap();
        let sum = no.sum(&click).unwrap();
        assert_abs_diff_eq!((sum.matrix() - Operator::identity(b.clone()).matrix()).norm(), 0.0, epsilon = 1e-12);
        for ev in no.eigenvalues() {
            assert!((0.0..=1.0).contains(&ev));
        }

        let nr = DetectorModel::number_resolving(0.73).unwrap();
        let total = (0..=6).fold(Operator::diagonal(b.clone(), &vec![0.0; b.dim()]).unwrap(), |acc, k| {
            acc.sum(&pattern_operator(b.clone(), &[ModeOutcome::Count(k, nr), ModeOutcome::Traced]).unwrap())
                .unwrap()
        });
        assert_abs_diff_eq!((total.matrix() - Operator::identity(b).matrix()).norm(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn number_resolving_with_dark_counts_is_rejected() {
        assert!(matches!(
            DetectorModel::new(DetectorKind::NumberResolving, 0.9, 1e-8),
            Err(Error::UnsupportedDetector(_))
        ));
        let s = prepare_fock(basis(1, 1), &[1]).unwrap();
        let thr = DetectorModel::perfect_threshold();
        assert!(matches!(
            outcome_probability(&s, &[ModeOutcome::Count(1, thr)]),
            Err(Error::UnsupportedDetector(_))
        ));
    }

    #[test]
    fn conditioning_renormalizes() {
        let b = basis(2, 1);
        let s = prepare_fock(b.clone(), &[1, 0]).unwrap();
        let s = crate::fock::apply_beamsplitter(&s, &crate::fock::BeamSplitterSpec::new(0.25, 0, 1).unwrap()).unwrap();
        let det = DetectorModel::perfect_threshold();
        let c = condition(&s, &[ModeOutcome::Traced, ModeOutcome::NoClick(det)]).unwrap();
        assert_abs_diff_eq!(c.probability, 0.25, epsilon = 1e-15);
        let post = c.state.unwrap();
        assert_abs_diff_eq!(post.trace(), 1.0, epsilon = 1e-15);
        let i = b.index_of(&[1, 0]).unwrap();
        assert_abs_diff_eq!(post.matrix()[(i, i)].re, 1.0, epsilon = 1e-15);
    }
}
