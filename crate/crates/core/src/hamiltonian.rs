//! Real-symmetric Hamiltonians with a cached spectral decomposition.
//!
//! Every propagator `exp(-iHt)` is applied as `V diag(exp(-iE_k t)) V^T`, so a
//! Hamiltonian is diagonalized once and then queried at arbitrary times.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::basis::Basis;
use crate::error::{Error, Result};
use crate::state::StateVector;

#[derive(Debug, Clone)]
pub struct Hamiltonian {
    basis: Basis,
    entries: DMatrix<f64>,
    energies: DVector<f64>,
    /// Columns are orthonormal eigenvectors, in the order of `energies`.
    vectors: DMatrix<f64>,
}

impl Hamiltonian {
    /// Diagonalizes a dense real-symmetric matrix.
    pub fn new(basis: Basis, entries: DMatrix<f64>) -> Result<Self> {
        check_symmetric(basis.dim(), &entries)?;
        let eig = SymmetricEigen::new(entries.clone());
        let (energies, vectors) = sorted(eig.eigenvalues, eig.eigenvectors);
        Ok(Self { basis, entries, energies, vectors })
    }

    /// Builds a block-diagonal Hamiltonian from blocks acting on disjoint index
    /// sets. Each block is diagonalized on its own, so eigenvectors have no
    /// weight outside their block.
    pub fn from_blocks(basis: Basis, blocks: &[(Vec<usize>, DMatrix<f64>)]) -> Result<Self> {
        let dim = basis.dim();
        let mut covered = vec![false; dim];
        let mut entries = DMatrix::zeros(dim, dim);
        let mut energies = Vec::with_capacity(dim);
        let mut columns: Vec<DVector<f64>> = Vec::with_capacity(dim);

        for (indices, block) in blocks {
            check_symmetric(indices.len(), block)?;
            for &i in indices {
                if i >= dim {
                    return Err(Error::OutOfRange { index: i, max: dim - 1 });
                }
                if std::mem::replace(&mut covered[i], true) {
                    return Err(Error::InvalidParameter(format!("index {i} is in two blocks")));
                }
            }
            for (a, &i) in indices.iter().enumerate() {
                for (b, &j) in indices.iter().enumerate() {
                    entries[(i, j)] = block[(a, b)];
                }
            }
            let eig = SymmetricEigen::new(block.clone());
            for k in 0..indices.len() {
                let mut col = DVector::zeros(dim);
                for (a, &i) in indices.iter().enumerate() {
                    col[i] = eig.eigenvectors[(a, k)];
                }
                energies.push(eig.eigenvalues[k]);
                columns.push(col);
            }
        }
        if let Some(missing) = covered.iter().position(|c| !c) {
            return Err(Error::InvalidParameter(format!("index {missing} is in no block")));
        }

        let (energies, vectors) =
            sorted(DVector::from_vec(energies), DMatrix::from_columns(&columns));
        Ok(Self { basis, entries, energies, vectors })
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    /// Eigenvalues in ascending order.
    pub fn energies(&self) -> &DVector<f64> {
        &self.energies
    }

    pub fn eigenvectors(&self) -> &DMatrix<f64> {
        &self.vectors
    }

    pub fn trace(&self) -> f64 {
        self.entries.trace()
    }

    /// `exp(-i E_k t)` for every eigenvalue.
    pub fn phases(&self, t: f64) -> DVector<Complex64> {
        self.energies.map(|e| Complex64::from_polar(1.0, -e * t))
    }

    /// Dense `exp(-iHt)`.
    pub fn propagator(&self, t: f64) -> DMatrix<Complex64> {
        let phases = self.phases(t);
        let n = self.dim();
        let v = &self.vectors;
        DMatrix::from_fn(n, n, |i, j| {
            (0..n).map(|k| phases[k] * (v[(i, k)] * v[(j, k)])).sum()
        })
    }

    /// `psi` expressed in the eigenbasis, `V^T psi`.
    pub fn to_eigenbasis(&self, psi: &DVector<Complex64>) -> DVector<Complex64> {
        real_mul(&self.vectors, psi, true)
    }

    /// Inverse of [`Hamiltonian::to_eigenbasis`].
    pub fn from_eigenbasis(&self, coeffs: &DVector<Complex64>) -> DVector<Complex64> {
        real_mul(&self.vectors, coeffs, false)
    }

    /// `V^T M V`.
    pub fn matrix_to_eigenbasis(&self, m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
        let v = self.vectors.map(|x| Complex64::new(x, 0.0));
        v.transpose() * m * v
    }

    /// `V M V^T`.
    pub fn matrix_from_eigenbasis(&self, m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
        let v = self.vectors.map(|x| Complex64::new(x, 0.0));
        &v * m * v.transpose()
    }

    /// Diagonal of `V M V^T` without forming the full product.
    pub fn diagonal_from_eigenbasis(&self, m: &DMatrix<Complex64>) -> Vec<f64> {
        // The imaginary part of a Hermitian M is antisymmetric and drops out.
        let re = m.map(|z| z.re);
        let v = &self.vectors;
        let w_re = &re * v.transpose();
        (0..self.dim())
            .map(|n| (0..self.dim()).map(|i| v[(n, i)] * w_re[(i, n)]).sum())
            .collect()
    }

    /// `exp(-iHt) psi`.
    pub fn evolve(&self, psi: &StateVector, t: f64) -> Result<StateVector> {
        self.basis.ensure_same(&psi.basis())?;
        let mut coeffs = self.to_eigenbasis(psi.amps());
        coeffs.component_mul_assign(&self.phases(t));
        Ok(psi.with_amps(self.from_eigenbasis(&coeffs)))
    }

    /// Relative Frobenius error of `V diag(E) V^T` against the stored matrix.
    pub fn reconstruction_error(&self) -> f64 {
        let rebuilt = &self.vectors * DMatrix::from_diagonal(&self.energies) * self.vectors.transpose();
        let scale = self.entries.norm().max(f64::MIN_POSITIVE);
        (rebuilt - &self.entries).norm() / scale
    }

    /// Largest entry of `|V^T V - I|`.
    pub fn orthogonality_error(&self) -> f64 {
        let gram = self.vectors.tr_mul(&self.vectors);
        (gram - DMatrix::identity(self.dim(), self.dim())).amax()
    }
}

/// Free-function form of [`Hamiltonian::evolve`].
pub fn evolve(h: &Hamiltonian, psi: &StateVector, t: f64) -> Result<StateVector> {
    h.evolve(psi, t)
}

fn check_symmetric(dim: usize, m: &DMatrix<f64>) -> Result<()> {
    if m.nrows() != dim || m.ncols() != dim {
        return Err(Error::DimensionMismatch { expected: dim, found: m.nrows().max(m.ncols()) });
    }
    if dim == 0 {
        return Err(Error::InvalidParameter("empty Hamiltonian".into()));
    }
    let asym = (m - m.transpose()).amax();
    if asym > 1e-12 * m.amax().max(1.0) {
        return Err(Error::NotHermitian(asym));
    }
    Ok(())
}

fn sorted(values: DVector<f64>, vectors: DMatrix<f64>) -> (DVector<f64>, DMatrix<f64>) {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let energies = DVector::from_iterator(values.len(), order.iter().map(|&k| values[k]));
    let columns: Vec<_> = order.iter().map(|&k| vectors.column(k).into_owned()).collect();
    (energies, DMatrix::from_columns(&columns))
}

/// Real matrix (or its transpose) times a complex vector.
fn real_mul(m: &DMatrix<f64>, v: &DVector<Complex64>, transpose: bool) -> DVector<Complex64> {
    let re = v.map(|z| z.re);
    let im = v.map(|z| z.im);
    let (re, im) = if transpose { (m.tr_mul(&re), m.tr_mul(&im)) } else { (m * re, m * im) };
    re.zip_map(&im, Complex64::new)
}
