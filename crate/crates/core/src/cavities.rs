//! Two optical cavities exchanging `N` photons through a fiber.
//!
//! The dynamics stays in the fixed-`N` sector `|N-k, k>`. Starting from
//! `|N,0>`, the amplitudes to remain (`c_0`) and to have moved every photon
//! (`c_N`) are
//!
//! ```text
//! c_0 = cos^N(Jt/2),    c_N = (-i)^N sin^N(Jt/2)
//! ```
//!
//! and the N00N-state measures below are built from these two numbers.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::basis::{Basis, BasisLabel};
use crate::entropy::renyi2_probabilities;
use crate::error::{Error, Result};
use crate::hamiltonian::Hamiltonian;
use crate::state::StateVector;

/// Below this `|c_0 c_N|` the relative phase is meaningless.
pub const PHASE_DEGENERACY: f64 = 1e-14;

/// Normalization of the hopping term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum HoppingConvention {
    /// Off-diagonal `+(J/2) sqrt((k+1)(N-k))`: equidistant levels spaced by `J`,
    /// reproducing `c_0 = cos^N(Jt/2)` and `c_N = (-i)^N sin^N(Jt/2)`.
    #[default]
    SpacingJ,
    /// Off-diagonal `-J sqrt((k+1)(N-k))`, the bare operator `-J(a1+ a2 + a2+ a1)`.
    /// Levels are spaced by `2J`.
    Literal,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CavityParams {
    pub n_photons: usize,
    /// Inter-cavity coupling `J`.
    pub coupling: f64,
    /// Single-mode frequency; only adds the global phase `exp(-i omega0 N t)`.
    pub omega0: f64,
    pub hopping: HoppingConvention,
}

impl CavityParams {
    pub fn new(n_photons: usize, coupling: f64, omega0: f64) -> Result<Self> {
        let p = Self { n_photons, coupling, omega0, hopping: HoppingConvention::SpacingJ };
        p.validate()?;
        Ok(p)
    }

    pub fn with_hopping(mut self, hopping: HoppingConvention) -> Self {
        self.hopping = hopping;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_photons < 1 {
            return Err(Error::InvalidParameter("photon number must be at least 1".into()));
        }
        if !(self.coupling > 0.0) || !self.coupling.is_finite() {
            return Err(Error::InvalidParameter(format!("coupling J = {} must be > 0", self.coupling)));
        }
        if !self.omega0.is_finite() {
            return Err(Error::InvalidParameter("omega0 must be finite".into()));
        }
        Ok(())
    }

    pub fn basis(&self) -> Basis {
        Basis::TwoCavity { n_photons: self.n_photons }
    }
}

/// Tridiagonal Hamiltonian in the basis `|N-k, k>`, `k = 0..=N`.
pub fn build_two_cavity_hamiltonian(p: &CavityParams) -> Result<Hamiltonian> {
    p.validate()?;
    let n = p.n_photons;
    let mut m = DMatrix::from_diagonal_element(n + 1, n + 1, p.omega0 * n as f64);
    for k in 0..n {
        let bosonic = (((k + 1) * (n - k)) as f64).sqrt();
        let hop = match p.hopping {
            HoppingConvention::SpacingJ => 0.5 * p.coupling * bosonic,
            HoppingConvention::Literal => -p.coupling * bosonic,
        };
        m[(k + 1, k)] = hop;
        m[(k, k + 1)] = hop;
    }
    Hamiltonian::new(p.basis(), m)
}

/// Fock state `|left, N-left>`.
pub fn fock_state(n_photons: usize, left: usize) -> Result<StateVector> {
    if left > n_photons {
        return Err(Error::OutOfRange { index: left, max: n_photons });
    }
    StateVector::from_label(
        Basis::TwoCavity { n_photons },
        BasisLabel::TwoCavity { left, right: n_photons - left },
    )
}

/// `|N,0>`, every photon in the left cavity.
pub fn initial_state(n_photons: usize) -> StateVector {
    fock_state(n_photons, n_photons).expect("valid label")
}

/// `|0,N>`, every photon in the right cavity.
pub fn transferred_state(n_photons: usize) -> StateVector {
    fock_state(n_photons, 0).expect("valid label")
}

/// `(|N,0> + exp(i phi N) |0,N>) / sqrt(2)`.
pub fn noon_state(n_photons: usize, phi: f64) -> StateVector {
    let mut amps = nalgebra::DVector::zeros(n_photons + 1);
    amps[0] = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    amps[n_photons] = Complex64::from_polar(std::f64::consts::FRAC_1_SQRT_2, phi * n_photons as f64);
    StateVector::new(Basis::TwoCavity { n_photons }, amps).expect("dimension matches")
}

/// `<N,0|E_k> = 2^(-N/2) C(N,k)^(1/2)`.
pub fn overlap_initial_eigenstate(n_photons: usize, k: usize) -> Result<f64> {
    if k > n_photons {
        return Err(Error::OutOfRange { index: k, max: n_photons });
    }
    // log-space keeps large N finite
    let ln_binom = ln_factorial(n_photons) - ln_factorial(k) - ln_factorial(n_photons - k);
    Ok((0.5 * ln_binom - 0.5 * n_photons as f64 * std::f64::consts::LN_2).exp())
}

fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|i| (i as f64).ln()).sum()
}

/// Closed-form `(c_0, c_N)` at time `t`, without the `omega0` global phase.
pub fn analytic_amplitudes(p: &CavityParams, t: f64) -> (Complex64, Complex64) {
    let n = p.n_photons as i32;
    let half = 0.5 * p.coupling * t;
    let c0 = Complex64::new(half.cos().powi(n), 0.0);
    let cn = Complex64::new(0.0, -1.0).powi(n) * half.sin().powi(n);
    (c0, cn)
}

/// `exp(-i omega0 N t)`, the phase every amplitude picks up from `omega0`.
pub fn omega0_phase(p: &CavityParams, t: f64) -> Complex64 {
    Complex64::from_polar(1.0, -p.omega0 * p.n_photons as f64 * t)
}

/// `(c_0, c_N) = (<N,0|psi>, <0,N|psi>)`.
pub fn amplitudes(psi: &StateVector) -> Result<(Complex64, Complex64)> {
    match psi.basis() {
        Basis::TwoCavity { n_photons } => Ok((psi.amp(0), psi.amp(n_photons))),
        other => Err(Error::BasisMismatch(format!("expected two-cavity basis, got {other:?}"))),
    }
}

/// N00N-state measures derived from `c_0` and `c_N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoonMeasures {
    pub abs_c0: f64,
    pub abs_cn: f64,
    /// `p_e = 2 |c_0 c_N|`.
    pub p_e: f64,
    /// Fidelity with `(|N,0> + |0,N>)/sqrt 2`.
    pub fidelity_phi0: f64,
    /// Fidelity with `(|N,0> - |0,N>)/sqrt 2`, the target of relative phase pi.
    pub fidelity_phipi: f64,
    /// Fidelity at the requested N00N phase `phi`.
    pub fidelity_phi: f64,
    /// `Delta = 2 |c_0||c_N| cos(Phi) = <A>`.
    pub delta: f64,
    /// `Phi = arg c_N - arg c_0` in `(-pi, pi]`.
    pub phase: f64,
    /// Set when `|c_0 c_N|` is too small for `phase` to mean anything.
    pub phase_degenerate: bool,
    /// `<A^2> = |c_0|^2 + |c_N|^2`.
    pub a2_expectation: f64,
}

impl NoonMeasures {
    /// `<A> = 2 Re(conj(c_0) c_N)`.
    pub fn a_expectation(&self) -> f64 {
        self.delta
    }

    /// Husimi-Q value of the `phi = 0` fidelity.
    pub fn husimi_q(&self) -> f64 {
        self.fidelity_phi0 / PI
    }
}

/// Measures for amplitudes `c0`, `cn` in an `N`-photon system, with the
/// fidelity additionally evaluated at N00N phase `phi`.
pub fn noon_measures(c0: Complex64, cn: Complex64, n_photons: usize, phi: f64) -> NoonMeasures {
    let abs_c0 = c0.norm();
    let abs_cn = cn.norm();
    let product = abs_c0 * abs_cn;
    let phase_degenerate = product < PHASE_DEGENERACY;
    let phase = if phase_degenerate { 0.0 } else { wrap_phase(cn.arg() - c0.arg()) };
    let a2 = abs_c0 * abs_c0 + abs_cn * abs_cn;
    let coherence = 2.0 * (c0.conj() * cn).re;
    NoonMeasures {
        abs_c0,
        abs_cn,
        p_e: 2.0 * product,
        fidelity_phi0: 0.5 * (a2 + coherence),
        fidelity_phipi: 0.5 * (a2 - coherence),
        fidelity_phi: noon_fidelity(c0, cn, n_photons, phi),
        delta: coherence,
        phase,
        phase_degenerate,
        a2_expectation: a2,
    }
}

/// `F = (|c_0|^2 + |c_N|^2 + 2|c_0||c_N| cos(Phi + phi N)) / 2`.
pub fn noon_fidelity(c0: Complex64, cn: Complex64, n_photons: usize, phi: f64) -> f64 {
    let abs_c0 = c0.norm();
    let abs_cn = cn.norm();
    let phase = if abs_c0 * abs_cn < PHASE_DEGENERACY { 0.0 } else { cn.arg() - c0.arg() };
    0.5 * (abs_c0 * abs_c0
        + abs_cn * abs_cn
        + 2.0 * abs_c0 * abs_cn * (phase + phi * n_photons as f64).cos())
}

/// Maps an angle into `(-pi, pi]`.
pub fn wrap_phase(x: f64) -> f64 {
    let mut y = x.rem_euclid(2.0 * PI);
    if y > PI {
        y -= 2.0 * PI;
    }
    y
}

/// `P_e = max_t 2|c_0 c_N|`, attained at `Jt = pi/2`.
pub fn max_entanglement_probability(p: &CavityParams) -> f64 {
    let (c0, cn) = analytic_amplitudes(p, 0.5 * PI / p.coupling);
    2.0 * c0.norm() * cn.norm()
}

/// One time point of a unitary scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoonReport {
    pub t: f64,
    /// Numerical amplitudes with the `omega0` phase divided out.
    pub c0: Complex64,
    pub cn: Complex64,
    pub measures: NoonMeasures,
    /// Rényi-2 entropy between the two cavities.
    pub renyi2: f64,
}

/// `0, dt, 2dt, ...` up to and including `t_max` (within `dt/2`).
pub fn time_grid(t_max: f64, dt: f64) -> Result<Vec<f64>> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::InvalidParameter(format!("time step {dt} must be > 0")));
    }
    if !(t_max >= dt) || !t_max.is_finite() {
        return Err(Error::InvalidParameter(format!("t_max {t_max} must be >= dt {dt}")));
    }
    let count = (t_max / dt + 0.5).ceil() as usize;
    Ok((0..count).map(|k| k as f64 * dt).filter(|t| *t < t_max + 0.5 * dt).collect())
}

/// Evolves `|N,0>` to time `t` and extracts the report.
pub fn report_at(p: &CavityParams, h: &Hamiltonian, t: f64) -> Result<NoonReport> {
    let psi = h.evolve(&initial_state(p.n_photons), t)?;
    let unphase = omega0_phase(p, t).conj();
    let (c0, cn) = amplitudes(&psi)?;
    let (c0, cn) = (c0 * unphase, cn * unphase);
    let populations = psi.populations();
    let total: f64 = populations.iter().sum();
    let probs: Vec<f64> = populations.iter().map(|x| x / total).collect();
    Ok(NoonReport {
        t,
        c0,
        cn,
        measures: noon_measures(c0, cn, p.n_photons, 0.0),
        renyi2: renyi2_probabilities(&probs)?,
    })
}

/// Unitary evolution of `|N,0>` sampled on [`time_grid`].
pub fn unitary_scan(p: &CavityParams, t_max: f64, dt: f64) -> Result<Vec<NoonReport>> {
    let grid = time_grid(t_max, dt)?;
    let h = build_two_cavity_hamiltonian(p)?;
    grid.par_iter().map(|&t| report_at(p, &h, t)).collect()
}

/// Normalized occupancy of `(|c_0|, |c_N|)` on a `bins x bins` grid over `[0,1]^2`.
#[derive(Debug, Clone, PartialEq)]
pub struct VisitHistogram {
    bins: usize,
    /// Row-major: row = `|c_0|` bin, column = `|c_N|` bin.
    weights: Vec<f64>,
}

impl VisitHistogram {
    pub fn bins(&self) -> usize {
        self.bins
    }

    pub fn get(&self, c0_bin: usize, cn_bin: usize) -> f64 {
        self.weights[c0_bin * self.bins + cn_bin]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Lower edge, upper edge of bin `i`.
    pub fn bin_edges(&self, i: usize) -> (f64, f64) {
        let w = 1.0 / self.bins as f64;
        (i as f64 * w, (i + 1) as f64 * w)
    }

    /// Non-empty cells as `(c0_bin, cn_bin, weight)`.
    pub fn occupied(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.weights
            .iter()
            .enumerate()
            .filter(|(_, w)| **w > 0.0)
            .map(move |(k, w)| (k / self.bins, k % self.bins, *w))
    }
}

pub fn bin_index(x: f64, bins: usize) -> usize {
    ((x.clamp(0.0, 1.0) * bins as f64) as usize).min(bins - 1)
}

pub fn amplitude_visit_histogram(scan: &[NoonReport], bins: usize) -> Result<VisitHistogram> {
    if bins < 2 {
        return Err(Error::InvalidParameter(format!("need at least 2 bins, got {bins}")));
    }
    if scan.is_empty() {
        return Err(Error::InvalidParameter("empty scan".into()));
    }
    let mut counts = vec![0usize; bins * bins];
    for r in scan {
        counts[bin_index(r.measures.abs_c0, bins) * bins + bin_index(r.measures.abs_cn, bins)] += 1;
    }
    let total = scan.len() as f64;
    Ok(VisitHistogram { bins, weights: counts.into_iter().map(|c| c as f64 / total).collect() })
}
