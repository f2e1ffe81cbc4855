//! A single cavity mode coupled to one qubit (Jaynes-Cummings, rotating wave).
//!
//! The Hamiltonian is block diagonal with `N` blocks
//!
//! ```text
//! H_n = 1/2 [[ n w,            Omega sqrt(n+1) ],
//!            [ Omega sqrt(n+1), (n+1) w        ]]
//! ```
//!
//! where block `n` couples `|up,n>` with `|down,n+1>`: flipping the qubit
//! absorbs or emits one photon. `|down,1>` has no partner in the truncated
//! space and keeps the diagonal energy `w/2`, and `|down,N+1>` is carried to
//! close the last block, so the state space has `2N+1` states and the photon
//! number runs over `1..=N+1`. The qubit frequency `w_a` does not enter the
//! block matrices and is kept only as metadata.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::basis::{Basis, BasisLabel, Qubit};
use crate::cavities::time_grid;
use crate::entropy::renyi2_density;
use crate::error::{Error, Result};
use crate::hamiltonian::Hamiltonian;
use crate::monitor::{project_out, MonitorProtocol, EXTINCTION_THRESHOLD};
use crate::state::{DensityMatrix, StateVector, EXACT_TOL};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JcParams {
    /// Cavity frequency `w`.
    pub omega: f64,
    /// Qubit transition frequency `w_a` (metadata only).
    pub omega_a: f64,
    /// Coupling `Omega`.
    pub coupling: f64,
    /// Highest block index `N`.
    pub n_max: usize,
}

impl JcParams {
    pub fn new(omega: f64, omega_a: f64, coupling: f64, n_max: usize) -> Result<Self> {
        let p = Self { omega, omega_a, coupling, n_max };
        p.validate()?;
        Ok(p)
    }

    /// `N = 15`, `Omega/w = 0.1`, `w = w_a = 1`.
    pub fn standard() -> Self {
        Self { omega: 1.0, omega_a: 1.0, coupling: 0.1, n_max: 15 }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_max < 1 {
            return Err(Error::InvalidParameter("n_max must be at least 1".into()));
        }
        if !(self.omega > 0.0) || !self.omega.is_finite() {
            return Err(Error::InvalidParameter(format!("cavity frequency {} must be > 0", self.omega)));
        }
        if !self.coupling.is_finite() || !self.omega_a.is_finite() {
            return Err(Error::InvalidParameter("coupling and qubit frequency must be finite".into()));
        }
        Ok(())
    }

    pub fn basis(&self) -> Basis {
        Basis::CavityQubit { n_max: self.n_max }
    }

    /// Photon numbers `1..=N+1` of the reduced photon matrix.
    pub fn photon_dim(&self) -> usize {
        self.n_max + 1
    }
}

/// The printed 2x2 block `H_n`.
pub fn block_matrix(p: &JcParams, n: usize) -> DMatrix<f64> {
    let n = n as f64;
    let off = 0.5 * p.coupling * (n + 1.0).sqrt();
    DMatrix::from_row_slice(2, 2, &[0.5 * n * p.omega, off, off, 0.5 * (n + 1.0) * p.omega])
}

pub fn build_jc_hamiltonian(p: &JcParams) -> Result<Hamiltonian> {
    p.validate()?;
    let mut blocks = Vec::with_capacity(p.n_max + 1);
    blocks.push((vec![0], DMatrix::from_element(1, 1, 0.5 * p.omega)));
    for n in 1..=p.n_max {
        blocks.push((vec![2 * n - 1, 2 * n], block_matrix(p, n)));
    }
    Hamiltonian::from_blocks(p.basis(), &blocks)
}

/// The two basis states coupled by block `n`: `(|up,n>, |down,n+1>)`.
pub fn jc_basis_of_block(p: &JcParams, n: usize) -> Result<(BasisLabel, BasisLabel)> {
    if n < 1 || n > p.n_max {
        return Err(Error::OutOfRange { index: n, max: p.n_max });
    }
    Ok((
        BasisLabel::CavityQubit { sigma: Qubit::Up, n },
        BasisLabel::CavityQubit { sigma: Qubit::Down, n: n + 1 },
    ))
}

/// Qubit level and photon number of basis index `i`.
fn label_parts(i: usize) -> (Qubit, usize) {
    if i == 0 {
        (Qubit::Down, 1)
    } else if i % 2 == 1 {
        (Qubit::Up, i.div_ceil(2))
    } else {
        (Qubit::Down, i / 2 + 1)
    }
}

/// Initial condition over the down states `|down,n>`, `n = 1..=N`.
#[derive(Debug, Clone, PartialEq)]
pub enum JcEnsemble {
    /// Incoherent mixture `sum w |down,n0><down,n0|` given as `(n0, w)`.
    Mixed(Vec<(usize, f64)>),
    /// Pure `sum_n c_n |down,n>`; `coeffs[0]` is `c_1`.
    Pure(Vec<Complex64>),
}

impl JcEnsemble {
    /// Equal mixture of `|down,1>, ..., |down,count>`.
    pub fn uniform_down(count: usize) -> Self {
        let w = 1.0 / count as f64;
        JcEnsemble::Mixed((1..=count).map(|n| (n, w)).collect())
    }

    pub fn single(n0: usize) -> Self {
        JcEnsemble::Mixed(vec![(n0, 1.0)])
    }

    pub fn validate(&self, p: &JcParams) -> Result<()> {
        match self {
            JcEnsemble::Mixed(members) => {
                if members.is_empty() {
                    return Err(Error::InvalidParameter("empty ensemble".into()));
                }
                for &(n0, w) in members {
                    if n0 < 1 || n0 > p.n_max {
                        return Err(Error::OutOfRange { index: n0, max: p.n_max });
                    }
                    if !(w >= 0.0) {
                        return Err(Error::InvalidParameter(format!("negative weight {w}")));
                    }
                }
                let total: f64 = members.iter().map(|(_, w)| w).sum();
                if (total - 1.0).abs() > EXACT_TOL {
                    return Err(Error::NotNormalized(total));
                }
            }
            JcEnsemble::Pure(coeffs) => {
                if coeffs.is_empty() || coeffs.len() > p.n_max {
                    return Err(Error::InvalidParameter(format!(
                        "{} coefficients for n_max = {}",
                        coeffs.len(),
                        p.n_max
                    )));
                }
                let total: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum();
                if (total - 1.0).abs() > EXACT_TOL {
                    return Err(Error::NotNormalized(total));
                }
            }
        }
        Ok(())
    }

    /// Weighted pure members.
    pub fn members(&self, p: &JcParams) -> Result<Vec<(f64, StateVector)>> {
        self.validate(p)?;
        let basis = p.basis();
        match self {
            JcEnsemble::Mixed(members) => members
                .iter()
                .filter(|(_, w)| *w > 0.0)
                .map(|&(n0, w)| Ok((w, down_state(p, n0)?)))
                .collect(),
            JcEnsemble::Pure(coeffs) => {
                let mut amps = DVector::zeros(basis.dim());
                for (k, c) in coeffs.iter().enumerate() {
                    amps[down_index(k + 1)] = *c;
                }
                Ok(vec![(1.0, StateVector::new(basis, amps)?)])
            }
        }
    }

    pub fn density(&self, p: &JcParams) -> Result<DensityMatrix> {
        DensityMatrix::from_mixture(&self.members(p)?)
    }
}

fn down_index(n: usize) -> usize {
    if n == 1 {
        0
    } else {
        2 * (n - 1)
    }
}

pub fn down_state(p: &JcParams, n: usize) -> Result<StateVector> {
    StateVector::from_label(p.basis(), BasisLabel::CavityQubit { sigma: Qubit::Down, n })
}

/// Default projector reference: the pure state itself, or for a mixture the
/// equal-amplitude superposition over the occupied down states.
pub fn default_reference(p: &JcParams, ens: &JcEnsemble) -> Result<StateVector> {
    match ens {
        JcEnsemble::Pure(_) => Ok(ens.members(p)?.remove(0).1),
        JcEnsemble::Mixed(_) => {
            let support: Vec<usize> = ens
                .members(p)?
                .iter()
                .map(|(_, s)| s.amps().iter().position(|a| a.norm() > 0.0).expect("basis state"))
                .collect();
            let mut amps = DVector::zeros(p.basis().dim());
            let a = Complex64::new(1.0 / (support.len() as f64).sqrt(), 0.0);
            for i in support {
                amps[i] = a;
            }
            StateVector::new(p.basis(), amps)
        }
    }
}

/// Which states the measurements project out.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ProjectorMode {
    /// One reference state (the protocol's) for every ensemble member.
    #[default]
    Shared,
    /// Each member projects out its own initial state.
    PerMember,
}

/// `rho_bar_{nn'} = sum_sigma rho_{sigma n, sigma n'}`, over photon numbers
/// `1..=N+1` (row `i` is `n = i + 1`).
pub fn reduce_over_qubit(rho: &DensityMatrix, p: &JcParams) -> Result<DensityMatrix> {
    p.basis().ensure_same(&rho.basis())?;
    let dim = rho.dim();
    let mut out = DMatrix::zeros(p.photon_dim(), p.photon_dim());
    for i in 0..dim {
        let (si, ni) = label_parts(i);
        for j in 0..dim {
            let (sj, nj) = label_parts(j);
            if si == sj {
                out[(ni - 1, nj - 1)] += rho.get(i, j);
            }
        }
    }
    Ok(DensityMatrix::from_raw(photon_basis(p), out))
}

fn photon_basis(p: &JcParams) -> Basis {
    Basis::Generic { dim: p.photon_dim() }
}

/// Photon matrix of `sum_k w_k |psi_k><psi_k|`, divided by its trace.
/// Members may be unnormalized; their norms act as extra weights.
pub fn photon_matrix_of_states(members: &[(f64, StateVector)]) -> Result<DensityMatrix> {
    let first = members
        .first()
        .ok_or_else(|| Error::InvalidParameter("no states".into()))?;
    let n_max = match first.1.basis() {
        Basis::CavityQubit { n_max } => n_max,
        other => return Err(Error::BasisMismatch(format!("expected cavity-qubit basis, got {other:?}"))),
    };
    let photons = n_max + 1;
    let mut out = DMatrix::<Complex64>::zeros(photons, photons);
    for (w, psi) in members {
        first.1.basis().ensure_same(&psi.basis())?;
        let amps = psi.amps();
        for i in 0..amps.len() {
            let (si, ni) = label_parts(i);
            let wi = amps[i] * *w;
            for j in 0..amps.len() {
                let (sj, nj) = label_parts(j);
                if si == sj {
                    out[(ni - 1, nj - 1)] += wi * amps[j].conj();
                }
            }
        }
    }
    let trace: f64 = out.diagonal().iter().map(|z| z.re).sum();
    if !(trace >= EXTINCTION_THRESHOLD) {
        return Err(Error::NotNormalized(trace));
    }
    out.unscale_mut(trace);
    Ok(DensityMatrix::from_raw(Basis::Generic { dim: photons }, out))
}

/// Monitored evolution of every ensemble member as an unnormalized pure state.
#[derive(Debug, Clone)]
pub struct JcMonitor<'p, 'h> {
    proto: &'p MonitorProtocol<'h>,
    mode: ProjectorMode,
    /// `(weight, initial state, current unnormalized state)`
    members: Vec<(f64, StateVector, StateVector)>,
    step: usize,
}

impl<'p, 'h> JcMonitor<'p, 'h> {
    pub fn new(p: &JcParams, ens: &JcEnsemble, proto: &'p MonitorProtocol<'h>, mode: ProjectorMode) -> Result<Self> {
        p.basis().ensure_same(&proto.hamiltonian().basis())?;
        let members = ens
            .members(p)?
            .into_iter()
            .map(|(w, s)| (w, s.clone(), s))
            .collect();
        Ok(Self { proto, mode, members, step: 0 })
    }

    pub fn step(&self) -> usize {
        self.step
    }

    /// `sum_k w_k <psi_k|psi_k>`.
    pub fn total_weight(&self) -> f64 {
        self.members.iter().map(|(w, _, s)| w * s.norm_sqr()).sum()
    }

    pub fn advance(&mut self) -> Result<()> {
        let first = self.step == 0;
        let h = self.proto.hamiltonian();
        let tau = self.proto.tau();
        let shared = self.proto.reference();
        let mode = self.mode;
        self.members.par_iter_mut().try_for_each(|(_, initial, psi)| -> Result<()> {
            if !first {
                let reference = match mode {
                    ProjectorMode::Shared => &*shared,
                    ProjectorMode::PerMember => &*initial,
                };
                *psi = project_out(reference, psi)?;
            }
            *psi = h.evolve(psi, tau)?;
            Ok(())
        })?;
        self.step += 1;
        let total = self.total_weight();
        if !(total >= EXTINCTION_THRESHOLD) {
            return Err(Error::Extinction { step: self.step, log_norm: total.ln() });
        }
        Ok(())
    }

    pub fn density(&self) -> DensityMatrix {
        let total = self.total_weight();
        let dim = self.proto.hamiltonian().dim();
        let mut rho = DMatrix::<Complex64>::zeros(dim, dim);
        for (w, _, psi) in &self.members {
            rho += psi.amps() * psi.amps().adjoint() * Complex64::new(*w / total, 0.0);
        }
        DensityMatrix::from_raw(self.proto.hamiltonian().basis(), rho)
    }

    pub fn photon_matrix(&self) -> Result<DensityMatrix> {
        let members: Vec<(f64, StateVector)> =
            self.members.iter().map(|(w, _, s)| (*w, s.clone())).collect();
        photon_matrix_of_states(&members)
    }
}

/// Normalized JC density matrix after `proto.steps()` monitored steps.
pub fn jc_monitored_density(
    p: &JcParams,
    ens: &JcEnsemble,
    proto: &MonitorProtocol,
    mode: ProjectorMode,
) -> Result<DensityMatrix> {
    let mut monitor = JcMonitor::new(p, ens, proto, mode)?;
    for _ in 0..proto.steps() {
        monitor.advance()?;
    }
    Ok(monitor.density())
}

/// Photon matrix of the ensemble evolved unitarily to time `t`.
pub fn unitary_photon_matrix(h: &Hamiltonian, members: &[(f64, StateVector)], t: f64) -> Result<DensityMatrix> {
    let evolved: Vec<(f64, StateVector)> = members
        .iter()
        .map(|(w, s)| Ok((*w, h.evolve(s, t)?)))
        .collect::<Result<_>>()?;
    photon_matrix_of_states(&evolved)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum JcScanMode {
    Unitary { t_max: f64, dt: f64 },
    Monitored { tau: f64, steps: usize, projector: ProjectorMode },
}

/// One point of a JC entropy scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JcEntropyPoint {
    /// Time `t` (unitary) or step count `m` (monitored).
    pub x: f64,
    pub renyi2: f64,
    /// Trace of the photon matrix before any rounding; should be 1.
    pub trace: f64,
}

/// Rényi-2 entropy of the photons (qubit traced out). Monitored scans use
/// [`default_reference`] as the shared projector reference and report
/// `m = 1..=steps`.
pub fn jc_entropy_scan(p: &JcParams, ens: &JcEnsemble, mode: JcScanMode) -> Result<Vec<JcEntropyPoint>> {
    let h = build_jc_hamiltonian(p)?;
    let members = ens.members(p)?;
    let point = |x: f64, photons: &DensityMatrix| -> Result<JcEntropyPoint> {
        Ok(JcEntropyPoint { x, renyi2: renyi2_density(photons)?, trace: photons.trace() })
    };
    match mode {
        JcScanMode::Unitary { t_max, dt } => time_grid(t_max, dt)?
            .par_iter()
            .map(|&t| point(t, &unitary_photon_matrix(&h, &members, t)?))
            .collect(),
        JcScanMode::Monitored { tau, steps, projector } => {
            let proto = MonitorProtocol::new(&h, tau, steps, default_reference(p, ens)?)?;
            let mut monitor = JcMonitor::new(p, ens, &proto, projector)?;
            let mut out = Vec::with_capacity(steps);
            for m in 1..=steps {
                monitor.advance()?;
                out.push(point(m as f64, &monitor.photon_matrix()?)?);
            }
            Ok(out)
        }
    }
}

/// Closed-form eigenvalues of block `n`, `(lower, upper)`.
pub fn block_eigenvalues(p: &JcParams, n: usize) -> (f64, f64) {
    let n = n as f64;
    let centre = 0.5 * (2.0 * n + 1.0) * p.omega / 2.0;
    let split = 0.25 * (p.omega * p.omega + 4.0 * p.coupling * p.coupling * (n + 1.0)).sqrt();
    (centre - split, centre + split)
}
