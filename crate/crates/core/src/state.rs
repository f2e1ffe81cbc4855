//! Pure states and density matrices.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::basis::{Basis, BasisLabel};
use crate::error::{Error, Result};

/// Tolerance for identities that hold in exact arithmetic.
pub const EXACT_TOL: f64 = 1e-12;

/// Complex amplitudes over a labeled basis. The vector need not be normalized;
/// monitored states carry their survival weight in the squared norm.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    basis: Basis,
    amps: DVector<Complex64>,
}

impl StateVector {
    pub fn new(basis: Basis, amps: DVector<Complex64>) -> Result<Self> {
        if amps.len() != basis.dim() {
            return Err(Error::DimensionMismatch { expected: basis.dim(), found: amps.len() });
        }
        Ok(Self { basis, amps })
    }

    pub fn from_slice(basis: Basis, amps: &[Complex64]) -> Result<Self> {
        Self::new(basis, DVector::from_column_slice(amps))
    }

    pub fn zeros(basis: Basis) -> Self {
        Self { basis, amps: DVector::zeros(basis.dim()) }
    }

    /// Unit vector on basis index `index`.
    pub fn basis_state(basis: Basis, index: usize) -> Result<Self> {
        let dim = basis.dim();
        if index >= dim {
            return Err(Error::OutOfRange { index, max: dim.saturating_sub(1) });
        }
        let mut amps = DVector::zeros(dim);
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(Self { basis, amps })
    }

    pub fn from_label(basis: Basis, label: BasisLabel) -> Result<Self> {
        let index = basis
            .index_of(label)
            .ok_or_else(|| Error::BasisMismatch(format!("{label} is not in {basis:?}")))?;
        Self::basis_state(basis, index)
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &DVector<Complex64> {
        &self.amps
    }

    pub fn amp(&self, index: usize) -> Complex64 {
        self.amps[index]
    }

    pub fn into_amps(self) -> DVector<Complex64> {
        self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() <= EXACT_TOL
    }

    /// Returns a copy rescaled to unit norm. A zero vector cannot be normalized.
    pub fn normalized(&self) -> Result<Self> {
        let norm = self.norm_sqr().sqrt();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::NotNormalized(norm * norm));
        }
        Ok(Self { basis: self.basis, amps: self.amps.unscale(norm) })
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Self { basis: self.basis, amps: &self.amps * factor }
    }

    /// Probabilities `|amp_i|^2`.
    pub fn populations(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    pub(crate) fn with_amps(&self, amps: DVector<Complex64>) -> Self {
        debug_assert_eq!(amps.len(), self.amps.len());
        Self { basis: self.basis, amps }
    }
}

/// `<a|b> = sum_i conj(a_i) b_i`.
pub fn inner(a: &StateVector, b: &StateVector) -> Result<Complex64> {
    a.basis.ensure_same(&b.basis)?;
    Ok(a.amps.dotc(&b.amps))
}

/// Hermitian matrix over a basis; normally unit trace and positive semidefinite.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    basis: Basis,
    entries: DMatrix<Complex64>,
}

impl DensityMatrix {
    /// Wraps `entries`, checking shape and hermiticity. Trace is not enforced;
    /// see [`DensityMatrix::normalized`].
    pub fn new(basis: Basis, entries: DMatrix<Complex64>) -> Result<Self> {
        let dim = basis.dim();
        if entries.nrows() != dim || entries.ncols() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: entries.nrows().max(entries.ncols()),
            });
        }
        let rho = Self { basis, entries };
        let asym = rho.hermiticity_error();
        let scale = rho.entries.iter().map(|z| z.norm()).fold(1.0f64, f64::max);
        if asym > EXACT_TOL * scale {
            return Err(Error::NotHermitian(asym));
        }
        Ok(rho)
    }

    pub(crate) fn from_raw(basis: Basis, entries: DMatrix<Complex64>) -> Self {
        Self { basis, entries }
    }

    /// `|psi><psi| / <psi|psi>`.
    pub fn from_pure(psi: &StateVector) -> Result<Self> {
        let psi = psi.normalized()?;
        Ok(Self { basis: psi.basis, entries: psi.amps() * psi.amps().adjoint() })
    }

    /// `sum_k w_k |psi_k><psi_k|` with normalized members and weights summing to one.
    pub fn from_mixture(members: &[(f64, StateVector)]) -> Result<Self> {
        let first = members
            .first()
            .ok_or_else(|| Error::InvalidParameter("empty mixture".into()))?;
        let basis = first.1.basis();
        let total: f64 = members.iter().map(|(w, _)| *w).sum();
        if members.iter().any(|(w, _)| *w < 0.0) || (total - 1.0).abs() > EXACT_TOL {
            return Err(Error::NotNormalized(total));
        }
        let mut entries = DMatrix::zeros(basis.dim(), basis.dim());
        for (w, psi) in members {
            basis.ensure_same(&psi.basis())?;
            let psi = psi.normalized()?;
            entries += (psi.amps() * psi.amps().adjoint()) * Complex64::new(*w, 0.0);
        }
        Ok(Self { basis, entries })
    }

    pub fn maximally_mixed(basis: Basis) -> Self {
        let dim = basis.dim();
        let entries = DMatrix::identity(dim, dim) * Complex64::new(1.0 / dim as f64, 0.0);
        Self { basis, entries }
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[(row, col)]
    }

    pub fn trace(&self) -> f64 {
        self.entries.diagonal().iter().map(|z| z.re).sum()
    }

    /// Real parts of the diagonal.
    pub fn diagonal(&self) -> Vec<f64> {
        self.entries.diagonal().iter().map(|z| z.re).collect()
    }

    pub fn normalized(&self) -> Result<Self> {
        let tr = self.trace();
        if !(tr > 0.0) || !tr.is_finite() {
            return Err(Error::NotNormalized(tr));
        }
        Ok(Self { basis: self.basis, entries: self.entries.unscale(tr) })
    }

    /// Largest `|rho_ij - conj(rho_ji)|`.
    pub fn hermiticity_error(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.entries[(i, j)] - self.entries[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// Eigenvalues of the Hermitian part, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let herm = (&self.entries + self.entries.adjoint()).unscale(2.0);
        let mut ev: Vec<f64> = herm.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues().first().copied().unwrap_or(0.0)
    }

    /// `Tr[rho^2]`.
    pub fn purity(&self) -> f64 {
        purity(self)
    }

    /// `U rho U^dagger` for a unitary (or any) square matrix `u`.
    pub fn conjugated(&self, u: &DMatrix<Complex64>) -> Result<Self> {
        if u.nrows() != self.dim() || u.ncols() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: u.nrows() });
        }
        Ok(Self { basis: self.basis, entries: u * &self.entries * u.adjoint() })
    }
}

/// `Tr[rho^2] = sum_ij |rho_ij|^2` for Hermitian `rho`.
pub fn purity(rho: &DensityMatrix) -> f64 {
    rho.entries.iter().map(|z| z.norm_sqr()).sum()
}
