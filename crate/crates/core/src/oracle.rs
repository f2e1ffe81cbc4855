//! Scaling-and-squaring Taylor evaluation of `exp(-iHt)`.
//!
//! Slow and independent of the eigensolver; tests use it to check
//! [`Hamiltonian::evolve`](crate::hamiltonian::Hamiltonian::evolve).

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hamiltonian::Hamiltonian;

pub const ORACLE_MAX_DIM: usize = 64;

pub fn expm_taylor_oracle(h: &Hamiltonian, t: f64) -> Result<DMatrix<Complex64>> {
    let dim = h.dim();
    if dim > ORACLE_MAX_DIM {
        return Err(Error::TooLarge { dim, limit: ORACLE_MAX_DIM });
    }
    let a = h.entries().map(|x| Complex64::new(0.0, -x * t));
    Ok(expm_taylor(&a))
}

/// `exp(A)` for a small dense complex matrix.
pub fn expm_taylor(a: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let n = a.nrows();
    let norm = (0..n)
        .map(|j| a.column(j).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max);
    let squarings = if norm > 0.25 { (norm / 0.25).log2().ceil() as i32 } else { 0 };
    let scaled = a.unscale(2f64.powi(squarings));

    let mut result = DMatrix::<Complex64>::identity(n, n);
    let mut term = DMatrix::<Complex64>::identity(n, n);
    for k in 1..=60 {
        term = (&term * &scaled).unscale(k as f64);
        result += &term;
        if term.iter().all(|z| z.norm() < 1e-20) {
            break;
        }
    }
    for _ in 0..squarings {
        result = &result * &result;
    }
    result
}
