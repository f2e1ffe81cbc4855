//! Density-matrix form of the monitored evolution,
//! `rho_m = T^(m-1) U rho_0 U^+ (T^+)^(m-1) / N`.
//!
//! The matrix is held in the eigenbasis of the Hamiltonian, where a unitary
//! step only rephases entries, and is renormalized after every step. The
//! running product of the per-step traces is the normalization `N`, tracked
//! in log form so it cannot underflow.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::{MonitorProtocol, EXTINCTION_THRESHOLD};
use crate::error::{Error, Result};
use crate::state::DensityMatrix;

const TRACE_TOL: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct DensityMonitor<'p, 'h> {
    proto: &'p MonitorProtocol<'h>,
    rho: DMatrix<Complex64>,
    reference: DVector<Complex64>,
    phases: DVector<Complex64>,
    step: usize,
    log_norm: f64,
}

impl<'p, 'h> DensityMonitor<'p, 'h> {
    pub fn new(proto: &'p MonitorProtocol<'h>, rho0: &DensityMatrix) -> Result<Self> {
        let h = proto.hamiltonian();
        h.basis().ensure_same(&rho0.basis())?;
        if (rho0.trace() - 1.0).abs() > TRACE_TOL {
            return Err(Error::NotNormalized(rho0.trace()));
        }
        Ok(Self {
            proto,
            rho: h.matrix_to_eigenbasis(rho0.entries()),
            reference: h.to_eigenbasis(proto.reference().amps()),
            phases: h.phases(proto.tau()),
            step: 0,
            log_norm: 0.0,
        })
    }

    /// Number of completed steps.
    pub fn step(&self) -> usize {
        self.step
    }

    /// `ln N` accumulated so far.
    pub fn log_norm(&self) -> f64 {
        self.log_norm
    }

    /// Applies one step: the unitary alone on the first call, projection then
    /// unitary afterwards.
    pub fn advance(&mut self) -> Result<()> {
        if self.step > 0 {
            self.project();
            // keep round-off from breaking hermiticity over long runs
            let adj = self.rho.adjoint();
            self.rho += adj;
            self.rho.unscale_mut(2.0);
        }
        let n = self.rho.nrows();
        for j in 0..n {
            let right = self.phases[j].conj();
            for i in 0..n {
                self.rho[(i, j)] *= self.phases[i] * right;
            }
        }
        self.step += 1;

        let trace: f64 = self.rho.diagonal().iter().map(|z| z.re).sum();
        let log_norm = self.log_norm + trace.ln();
        if !(trace > 0.0) || !(log_norm >= EXTINCTION_THRESHOLD.ln()) {
            return Err(Error::Extinction { step: self.step, log_norm });
        }
        self.rho.unscale_mut(trace);
        self.log_norm = log_norm;
        Ok(())
    }

    /// `Q rho Q` with `Q = 1 - |r><r|`, expanded so it costs O(dim^2).
    fn project(&mut self) {
        let r = &self.reference;
        let a = &self.rho * r;
        let c = r.dotc(&a);
        let n = self.rho.nrows();
        for j in 0..n {
            for i in 0..n {
                self.rho[(i, j)] += -r[i] * a[j].conj() - a[i] * r[j].conj() + c * r[i] * r[j].conj();
            }
        }
    }

    /// Current normalized density matrix in the original basis.
    pub fn density(&self) -> DensityMatrix {
        let h = self.proto.hamiltonian();
        let m = h.matrix_from_eigenbasis(&self.rho);
        // symmetrize away round-off
        let m = (&m + m.adjoint()).unscale(2.0);
        DensityMatrix::from_raw(h.basis(), m)
    }

    /// Diagonal of [`DensityMonitor::density`], computed without the full transform.
    pub fn basis_diagonal(&self) -> Vec<f64> {
        self.proto.hamiltonian().diagonal_from_eigenbasis(&self.rho)
    }
}

/// Normalized density matrix after `proto.steps()` steps.
pub fn monitored_density(proto: &MonitorProtocol, rho0: &DensityMatrix) -> Result<DensityMatrix> {
    let mut monitor = DensityMonitor::new(proto, rho0)?;
    for _ in 0..proto.steps() {
        monitor.advance()?;
    }
    Ok(monitor.density())
}
