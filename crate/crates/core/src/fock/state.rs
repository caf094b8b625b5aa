use std::sync::Arc;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use super::basis::FockBasis;
use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Numerical tolerances for density-matrix validation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Entrywise bound on `|rho - rho^dagger|`.
    pub hermitian: f64,
    /// Floor on the smallest eigenvalue.
    pub psd: f64,
    /// Allowed excess of the trace above one.
    pub trace_excess: f64,
    /// Allowed trace deficit from truncation leakage.
    pub truncation: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            hermitian: 1e-12,
            psd: 1e-10,
            trace_excess: 1e-12,
            truncation: 1e-12,
        }
    }
}

/// Density operator on a truncated Fock space.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumState {
    basis: Arc<FockBasis>,
    matrix: DMatrix<C64>,
}

impl QuantumState {
    /// Wraps a matrix after checking it against the default tolerances.
    pub fn from_density(basis: Arc<FockBasis>, matrix: DMatrix<C64>) -> Result<Self> {
        Self::from_density_with(basis, matrix, &Tolerances::default())
    }

    pub fn from_density_with(
        basis: Arc<FockBasis>,
        matrix: DMatrix<C64>,
        tol: &Tolerances,
    ) -> Result<Self> {
        if matrix.nrows() != basis.dim() || matrix.ncols() != basis.dim() {
            return Err(Error::InvalidDensityMatrix(format!(
                "shape {}x{} does not match basis dimension {}",
                matrix.nrows(),
                matrix.ncols(),
                basis.dim()
            )));
        }
        let state = Self { basis, matrix };
        state.validate(tol)?;
        Ok(state)
    }

    /// Normalized pure state `|psi><psi|` from amplitudes in basis order.
    pub fn from_pure(basis: Arc<FockBasis>, amplitudes: &[C64]) -> Result<Self> {
        if amplitudes.len() != basis.dim() {
            return Err(Error::InvalidDensityMatrix(format!(
                "{} amplitudes for basis dimension {}",
                amplitudes.len(),
                basis.dim()
            )));
        }
        let v = DVector::from_column_slice(amplitudes);
        let norm = v.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::InvalidDensityMatrix("zero or non-finite norm".into()));
        }
        let v = v / C64::from(norm);
        let matrix = &v * v.adjoint();
        Ok(Self { basis, matrix })
    }

    pub(crate) fn from_parts(basis: Arc<FockBasis>, matrix: DMatrix<C64>) -> Self {
        debug_assert_eq!(matrix.nrows(), basis.dim());
        Self { basis, matrix }
    }

    pub fn basis(&self) -> &FockBasis {
        &self.basis
    }

    pub fn basis_arc(&self) -> &Arc<FockBasis> {
        &self.basis
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.matrix
    }

    pub fn trace(&self) -> f64 {
        self.matrix.diagonal().iter().map(|z| z.re).sum()
    }

    /// How far the trace falls short of one; nonzero only when
    /// probability has leaked out of the truncated space.
    pub fn trace_deficit(&self) -> f64 {
        (1.0 - self.trace()).max(0.0)
    }

    pub fn hermiticity_error(&self) -> f64 {
        hermiticity_error(&self.matrix)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        let herm = hermitian_part(&self.matrix);
        SymmetricEigen::new(herm).eigenvalues.min()
    }

    pub fn validate(&self, tol: &Tolerances) -> Result<()> {
        let herm = self.hermiticity_error();
        if herm > tol.hermitian {
            return Err(Error::InvalidDensityMatrix(format!(
                "not Hermitian (max deviation {herm:e})"
            )));
        }
        let trace = self.trace();
        if trace > 1.0 + tol.trace_excess || trace < 1.0 - tol.truncation {
            return Err(Error::InvalidDensityMatrix(format!(
                "trace {trace} outside [1 - {}, 1 + {}]",
                tol.truncation, tol.trace_excess
            )));
        }
        let min_eig = self.min_eigenvalue();
        if min_eig < -tol.psd {
            return Err(Error::InvalidDensityMatrix(format!(
                "not positive semidefinite (eigenvalue {min_eig:e})"
            )));
        }
        Ok(())
    }

    /// `Re Tr[rho E]`.
    pub fn expectation(&self, op: &Operator) -> Result<f64> {
        if *self.basis != *op.basis {
            return Err(Error::BasisMismatch);
        }
        // Tr[AB] = sum_ij A_ij B_ji
        let mut acc = C64::new(0.0, 0.0);
        for j in 0..self.matrix.ncols() {
            for i in 0..self.matrix.nrows() {
                acc += self.matrix[(i, j)] * op.matrix[(j, i)];
            }
        }
        Ok(acc.re)
    }

    /// Population of each basis state.
    pub fn populations(&self) -> Vec<f64> {
        self.matrix.diagonal().iter().map(|z| z.re).collect()
    }

    /// Probability of finding exactly `n` photons in total, for `n = 0..=cap`.
    pub fn photon_number_distribution(&self) -> Vec<f64> {
        let mut dist = vec![0.0; self.basis.max_total_photons() + 1];
        for (i, p) in self.populations().into_iter().enumerate() {
            dist[self.basis.total_photons(i)] += p;
        }
        dist
    }

    /// `<psi| rho |psi>` for a normalized `psi` in basis order.
    pub fn fidelity_with_pure(&self, psi: &[C64]) -> Result<f64> {
        if psi.len() != self.basis.dim() {
            return Err(Error::BasisMismatch);
        }
        let v = DVector::from_column_slice(psi);
        Ok((v.adjoint() * &self.matrix * &v)[(0, 0)].re)
    }

    /// Same state with its trace scaled back to one.
    pub fn renormalized(&self) -> Result<Self> {
        let t = self.trace();
        if t <= 0.0 {
            return Err(Error::InvalidDensityMatrix("zero trace".into()));
        }
        Ok(Self {
            basis: self.basis.clone(),
            matrix: self.matrix.map(|z| z / t),
        })
    }

    /// Embeds the state into `total_modes` modes, the extra trailing modes
    /// in vacuum. The truncation cap is kept.
    pub fn with_vacuum_tail(&self, total_modes: usize) -> Result<Self> {
        let own = self.basis.mode_count();
        if total_modes < own {
            return Err(Error::WrongModeCount {
                expected: own,
                got: total_modes,
            });
        }
        let big = Arc::new(FockBasis::new(total_modes, self.basis.max_total_photons())?);
        let map = tail_embedding(&self.basis, &big);
        let mut matrix = DMatrix::zeros(big.dim(), big.dim());
        for (j, &bj) in map.iter().enumerate() {
            for (i, &bi) in map.iter().enumerate() {
                matrix[(bi, bj)] = self.matrix[(i, j)];
            }
        }
        Ok(Self::from_parts(big, matrix))
    }
}

/// Bounded Hermitian operator on a truncated Fock space (POVM elements,
/// Heisenberg-evolved observables).
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    pub(crate) basis: Arc<FockBasis>,
    pub(crate) matrix: DMatrix<C64>,
}

impl Operator {
    pub fn identity(basis: Arc<FockBasis>) -> Self {
        let d = basis.dim();
        Self {
            basis,
            matrix: DMatrix::identity(d, d),
        }
    }

    pub fn diagonal(basis: Arc<FockBasis>, weights: &[f64]) -> Result<Self> {
        if weights.len() != basis.dim() {
            return Err(Error::BasisMismatch);
        }
        let diag = DVector::from_iterator(weights.len(), weights.iter().map(|&w| C64::from(w)));
        Ok(Self {
            basis,
            matrix: DMatrix::from_diagonal(&diag),
        })
    }

    pub fn from_matrix(basis: Arc<FockBasis>, matrix: DMatrix<C64>) -> Result<Self> {
        if matrix.nrows() != basis.dim() || matrix.ncols() != basis.dim() {
            return Err(Error::BasisMismatch);
        }
        Ok(Self { basis, matrix })
    }

    pub fn basis(&self) -> &FockBasis {
        &self.basis
    }

    pub fn basis_arc(&self) -> &Arc<FockBasis> {
        &self.basis
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn hermiticity_error(&self) -> f64 {
        hermiticity_error(&self.matrix)
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = SymmetricEigen::new(hermitian_part(&self.matrix))
            .eigenvalues
            .iter()
            .copied()
            .collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    /// Largest eigenvalue with a unit eigenvector.
    pub fn max_eigenpair(&self) -> (f64, DVector<C64>) {
        let eig = SymmetricEigen::new(hermitian_part(&self.matrix));
        let (idx, value) = eig
            .eigenvalues
            .iter()
            .copied()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .expect("operator on an empty basis");
        (value, eig.eigenvectors.column(idx).into_owned())
    }

    pub fn sum(&self, other: &Self) -> Result<Self> {
        if *self.basis != *other.basis {
            return Err(Error::BasisMismatch);
        }
        Ok(Self {
            basis: self.basis.clone(),
            matrix: &self.matrix + &other.matrix,
        })
    }

    /// Compression onto the subspace where the trailing
    /// `mode_count - kept_modes` modes are in vacuum, expressed on a
    /// `kept_modes`-mode basis with the same cap.
    pub fn restrict_to_vacuum_tail(&self, kept_modes: usize) -> Result<Self> {
        if kept_modes == 0 || kept_modes > self.basis.mode_count() {
            return Err(Error::WrongModeCount {
                expected: self.basis.mode_count(),
                got: kept_modes,
            });
        }
        let small = Arc::new(FockBasis::new(kept_modes, self.basis.max_total_photons())?);
        let map = tail_embedding(&small, &self.basis);
        let matrix = DMatrix::from_fn(small.dim(), small.dim(), |i, j| self.matrix[(map[i], map[j])]);
        Ok(Self {
            basis: small,
            matrix,
        })
    }
}

/// For each state of `small`, the index of the same occupations padded with
/// vacuum in `big`.
fn tail_embedding(small: &FockBasis, big: &FockBasis) -> Vec<usize> {
    small
        .iter()
        .map(|occ| {
            let mut padded = occ.to_vec();
            padded.resize(big.mode_count(), 0);
            big.index_of(&padded).expect("same cap, padded state exists")
        })
        .collect()
}

fn hermitian_part(m: &DMatrix<C64>) -> DMatrix<C64> {
    (m + m.adjoint()).map(|z| z * 0.5)
}

fn hermiticity_error(m: &DMatrix<C64>) -> f64 {
    let mut worst: f64 = 0.0;
    for j in 0..m.ncols() {
        for i in 0..=j {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}
