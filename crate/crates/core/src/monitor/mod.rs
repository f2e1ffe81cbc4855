//! Repeated projective measurements with a fixed time step `tau`.
//!
//! One monitoring cycle is `T = exp(-iH tau) (1 - |ref><ref|)`. The state after
//! `m` steps is `T^(m-1) exp(-iH tau) |psi_0>`: the first step is plain unitary
//! evolution and the projector acts `m - 1` times. States are kept
//! unnormalized; their squared norm is the probability that no measurement has
//! found the system in the reference state.

mod density;

pub use density::{monitored_density, DensityMonitor};


pub use crate::entropy::{renyi2_density, renyi2_probabilities};
use crate::basis::Basis;
use crate::cavities::{build_two_cavity_hamiltonian, initial_state, CavityParams};
use crate::error::{Error, Result};
use crate::hamiltonian::Hamiltonian;
use crate::jc;
use crate::state::{inner, DensityMatrix, StateVector};

/// A trace or squared norm below this counts as extinction.
pub const EXTINCTION_THRESHOLD: f64 = 1e-300;

#[derive(Debug, Clone)]
pub struct MonitorProtocol<'h> {
    hamiltonian: &'h Hamiltonian,
    tau: f64,
    steps: usize,
    reference: StateVector,
}

impl<'h> MonitorProtocol<'h> {
    /// `reference` is the state projected out after every unitary step.
    pub fn new(hamiltonian: &'h Hamiltonian, tau: f64, steps: usize, reference: StateVector) -> Result<Self> {
        if !(tau > 0.0) || !tau.is_finite() {
            return Err(Error::InvalidParameter(format!("tau = {tau} must be > 0")));
        }
        if steps < 1 {
            return Err(Error::InvalidParameter("at least one step is required".into()));
        }
        hamiltonian.basis().ensure_same(&reference.basis())?;
        if !reference.is_normalized() {
            return Err(Error::NotNormalized(reference.norm_sqr()));
        }
        Ok(Self { hamiltonian, tau, steps, reference })
    }

    pub fn hamiltonian(&self) -> &'h Hamiltonian {
        self.hamiltonian
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn reference(&self) -> &StateVector {
        &self.reference
    }

    pub fn with_steps(mut self, steps: usize) -> Result<Self> {
        if steps < 1 {
            return Err(Error::InvalidParameter("at least one step is required".into()));
        }
        self.steps = steps;
        Ok(self)
    }
}

/// `(1 - |reference><reference|) psi` for normalized `reference`.
pub fn project_out(reference: &StateVector, psi: &StateVector) -> Result<StateVector> {
    let overlap = inner(reference, psi)?;
    Ok(psi.with_amps(psi.amps() - reference.amps() * overlap))
}

/// `exp(-iH tau) (psi - <ref|psi> ref)`, left unnormalized.
pub fn monitored_step(state: &StateVector, proto: &MonitorProtocol) -> Result<StateVector> {
    let projected = project_out(&proto.reference, state)?;
    proto.hamiltonian.evolve(&projected, proto.tau)
}

/// Record of one monitoring step.
#[derive(Debug, Clone)]
pub struct MonitorStep {
    pub m: usize,
    /// Unnormalized state after the step.
    pub state: StateVector,
    /// `s_m = <psi_m|psi_m>`.
    pub survival_norm: f64,
    /// `|<ref|psi_m>|^2` with `psi_m` unnormalized; this is `F_m` for the reference.
    pub return_prob_unnorm: f64,
    /// Same, for the normalized state.
    pub return_prob_norm: f64,
    /// `F_m = |<target|psi_m>|^2` per target, unnormalized state.
    pub target_probs_unnorm: Vec<f64>,
    pub target_probs_norm: Vec<f64>,
    /// `|<ref|(1 - P) psi_(m-1)>|` measured right after the projection; `None` for `m = 1`.
    pub post_projection_overlap: Option<f64>,
    /// Subsystem Rényi-2 entropy of the normalized state, where the basis has one.
    pub renyi2: Option<f64>,
}

impl MonitorStep {
    pub fn normalized_state(&self) -> StateVector {
        self.state.normalized().expect("extinct states are never recorded")
    }
}

#[derive(Debug, Clone)]
pub struct MonitorTrajectory {
    pub steps: Vec<MonitorStep>,
    /// First step at which the survival norm fell below [`EXTINCTION_THRESHOLD`].
    /// That step and later ones are not recorded.
    pub extinct_at: Option<usize>,
}

impl MonitorTrajectory {
    pub fn survival_norms(&self) -> Vec<f64> {
        self.steps.iter().map(|s| s.survival_norm).collect()
    }
}

/// Runs `proto.steps()` monitoring steps from `initial`, recording transition
/// probabilities into each of `targets`.
pub fn run_trajectory(
    proto: &MonitorProtocol,
    initial: &StateVector,
    targets: &[StateVector],
) -> Result<MonitorTrajectory> {
    proto.hamiltonian.basis().ensure_same(&initial.basis())?;
    if !initial.is_normalized() {
        return Err(Error::NotNormalized(initial.norm_sqr()));
    }
    for t in targets {
        initial.basis().ensure_same(&t.basis())?;
    }

    let mut steps = Vec::with_capacity(proto.steps);
    let mut extinct_at = None;
    let mut psi = initial.clone();
    for m in 1..=proto.steps {
        let mut post_projection_overlap = None;
        if m > 1 {
            let projected = project_out(&proto.reference, &psi)?;
            post_projection_overlap = Some(inner(&proto.reference, &projected)?.norm());
            psi = projected;
        }
        psi = proto.hamiltonian.evolve(&psi, proto.tau)?;

        let survival = psi.norm_sqr();
        if !(survival >= EXTINCTION_THRESHOLD) {
            extinct_at = Some(m);
            break;
        }
        let ret = inner(&proto.reference, &psi)?.norm_sqr();
        let target_probs_unnorm: Vec<f64> = targets
            .iter()
            .map(|t| inner(t, &psi).map(|z| z.norm_sqr()))
            .collect::<Result<_>>()?;
        let normalized = psi.normalized()?;
        steps.push(MonitorStep {
            m,
            survival_norm: survival,
            return_prob_unnorm: ret,
            return_prob_norm: ret / survival,
            target_probs_norm: target_probs_unnorm.iter().map(|p| p / survival).collect(),
            target_probs_unnorm,
            post_projection_overlap,
            renyi2: subsystem_renyi2(&normalized)?,
            state: psi.clone(),
        });
    }
    Ok(MonitorTrajectory { steps, extinct_at })
}

/// Rényi-2 entropy between the natural subsystems of the basis: the two
/// cavities, or the photons after tracing out the qubit. `None` for generic bases.
pub fn subsystem_renyi2(psi: &StateVector) -> Result<Option<f64>> {
    let psi = psi.normalized()?;
    match psi.basis() {
        Basis::TwoCavity { .. } => renyi2_probabilities(&psi.populations()).map(Some),
        Basis::CavityQubit { .. } => {
            let photons = jc::photon_matrix_of_states(&[(1.0, psi)])?;
            renyi2_density(&photons).map(Some)
        }
        Basis::Generic { .. } => Ok(None),
    }
}

/// Diagonal of the reduced density matrix of the left cavity, indexed by the
/// left photon count `n = 0..=N`. On the fixed-`N` sector the partial trace over
/// the right cavity is exactly the Fock-basis diagonal.
pub fn reduce_two_cavity(rho: &DensityMatrix) -> Result<Vec<f64>> {
    match rho.basis() {
        Basis::TwoCavity { n_photons } => {
            let diag = rho.diagonal();
            Ok((0..=n_photons).map(|n| diag[n_photons - n]).collect())
        }
        other => Err(Error::BasisMismatch(format!("expected two-cavity basis, got {other:?}"))),
    }
}

/// Rényi-2 entropy between the two cavities along unitary evolution of `|N,0>`.
pub fn entropy_scan_unitary(p: &CavityParams, grid: &[f64]) -> Result<Vec<(f64, f64)>> {
    let h = build_two_cavity_hamiltonian(p)?;
    let psi0 = initial_state(p.n_photons);
    grid.iter()
        .map(|&t| {
            let psi = h.evolve(&psi0, t)?;
            let probs = psi.populations();
            Ok((t, renyi2_probabilities(&probs)?))
        })
        .collect()
}

/// Per-step subsystem entropy of the normalized monitored state, `m = 1..=m_max`.
/// Extinction is an error.
pub fn entropy_scan_monitored(
    proto: &MonitorProtocol,
    initial: &StateVector,
    m_max: usize,
) -> Result<Vec<(usize, f64)>> {
    let proto = proto.clone().with_steps(m_max)?;
    let traj = run_trajectory(&proto, initial, &[])?;
    if let Some(step) = traj.extinct_at {
        let log_norm = traj.steps.last().map_or(0.0, |s| s.survival_norm.ln());
        return Err(Error::Extinction { step, log_norm });
    }
    traj.steps
        .iter()
        .map(|s| {
            s.renyi2
                .map(|e| (s.m, e))
                .ok_or_else(|| Error::BasisMismatch("basis has no subsystem split".into()))
        })
        .collect()
}
