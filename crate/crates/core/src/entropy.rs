//! Rényi entropies of probability vectors and density matrices, in bits.

use crate::error::{Error, Result};
use crate::state::DensityMatrix;

/// Allowed deviation of the input normalization from one.
pub const NORMALIZATION_TOL: f64 = 1e-8;

/// `S_2 = -log2 sum_n p_n^2`.
pub fn renyi2_probabilities(probs: &[f64]) -> Result<f64> {
    check_sum(probs.iter().sum())?;
    let s: f64 = probs.iter().map(|p| p * p).sum();
    Ok(-s.log2())
}

/// `S_2 = -log2 Tr[rho^2]`.
pub fn renyi2_density(rho: &DensityMatrix) -> Result<f64> {
    check_sum(rho.trace())?;
    Ok(-rho.purity().log2())
}

/// `S_alpha = log2(sum_n p_n^alpha) / (1 - alpha)`. The von Neumann limit
/// `alpha = 1` is not supported.
pub fn renyi_probabilities(probs: &[f64], alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    check_sum(probs.iter().sum())?;
    let s: f64 = probs.iter().filter(|p| **p > 0.0).map(|p| p.powf(alpha)).sum();
    Ok(s.log2() / (1.0 - alpha))
}

/// Rényi entropy of order `alpha` from the spectrum of `rho`.
pub fn renyi_density(rho: &DensityMatrix, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if alpha == 2.0 {
        return renyi2_density(rho);
    }
    check_sum(rho.trace())?;
    // Clip the tiny negative eigenvalues left by round-off.
    let eigs: Vec<f64> = rho.eigenvalues().into_iter().map(|e| e.max(0.0)).collect();
    let total: f64 = eigs.iter().sum();
    let probs: Vec<f64> = eigs.iter().map(|e| e / total).collect();
    renyi_probabilities(&probs, alpha)
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0) || alpha == 1.0 || !alpha.is_finite() {
        return Err(Error::InvalidParameter(format!("Renyi order {alpha} (must be > 0, != 1)")));
    }
    Ok(())
}

fn check_sum(sum: f64) -> Result<()> {
    if (sum - 1.0).abs() > NORMALIZATION_TOL || !sum.is_finite() {
        return Err(Error::NotNormalized(sum));
    }
    Ok(())
}
