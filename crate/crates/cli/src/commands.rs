use std::io;

use cavity_monitor::cavities::{
    amplitude_visit_histogram, build_two_cavity_hamiltonian, initial_state, noon_fidelity, noon_measures,
    transferred_state, unitary_scan, CavityParams, HoppingConvention,
};
use cavity_monitor::entropy::renyi2_density;
use cavity_monitor::jc::{
    build_jc_hamiltonian, default_reference, jc_entropy_scan, JcEnsemble, JcMonitor, JcParams, JcScanMode,
    ProjectorMode,
};
use cavity_monitor::monitor::{run_trajectory, MonitorProtocol};
use cavity_monitor::Error;

use crate::output::{format_float, Sink, Table};
use crate::{CavityArgs, Common, Hopping, JcArgs, JcMode, MonitorArgs, Projector, Reference, UnitaryArgs};

const SLACK: f64 = 1e-12;
const TRACE_TOL: f64 = 1e-10;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("i/o: {0}")]
    Io(#[source] io::Error),
    #[error("norm fell below the extinction threshold at step {0}")]
    Extinct(usize),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error(transparent)]
    Core(Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Io(_) => 4,
            CliError::Extinct(_) => 3,
            CliError::Invariant(_) => 1,
            CliError::Core(Error::InvalidParameter(_) | Error::OutOfRange { .. }) => 2,
            CliError::Core(Error::Extinction { .. }) => 3,
            CliError::Core(_) => 1,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Extinction { step, .. } => CliError::Extinct(step),
            other => CliError::Core(other),
        }
    }
}

pub struct Outcome {
    pub table: Table,
    pub extinct_at: Option<usize>,
}

fn positive(name: &str, x: f64) -> Result<(), CliError> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(CliError::Usage(format!("--{name} must be a positive number, got {x}")))
    }
}

fn finite(name: &str, x: f64) -> Result<(), CliError> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(CliError::Usage(format!("--{name} must be finite")))
    }
}

pub fn check_common(c: &Common) -> Result<(), CliError> {
    if !(1..=17).contains(&c.precision) {
        return Err(CliError::Usage(format!("--precision must be in 1..=17, got {}", c.precision)));
    }
    Ok(())
}

fn cavity_params(a: &CavityArgs) -> Result<CavityParams, CliError> {
    if a.n < 1 {
        return Err(CliError::Usage("--n must be at least 1".into()));
    }
    positive("j", a.j)?;
    finite("omega0", a.omega0)?;
    let hopping = match a.hopping {
        Hopping::SpacingJ => HoppingConvention::SpacingJ,
        Hopping::Literal => HoppingConvention::Literal,
    };
    Ok(CavityParams::new(a.n, a.j, a.omega0)?.with_hopping(hopping))
}

fn cavity_meta(t: &mut Table, command: &str, a: &CavityArgs) {
    t.meta("cavmon", env!("CARGO_PKG_VERSION"));
    t.meta("command", command);
    t.meta("n", a.n);
    t.meta("j", format_float(a.j, 17));
    t.meta("omega0", format_float(a.omega0, 17));
    match a.hopping {
        Hopping::SpacingJ => t.meta("hopping", "spacing-j (off-diagonal J/2 sqrt((k+1)(N-k)), levels J(k-N/2))"),
        Hopping::Literal => t.meta("hopping", "literal (off-diagonal J sqrt((k+1)(N-k)), levels 2J(k-N/2))"),
    }
    t.meta("units", "hbar=1, time in units of 1/J");
    t.meta("initial", "|N,0>");
}

pub fn unitary(a: &UnitaryArgs) -> Result<Outcome, CliError> {
    let p = cavity_params(&a.cavity)?;
    positive("dt", a.dt)?;
    positive("t-max", a.t_max)?;
    if a.t_max < a.dt {
        return Err(CliError::Usage("--t-max must be at least --dt".into()));
    }
    for phi in &a.phi {
        finite("phi", *phi)?;
    }
    if a.histogram.is_some() && a.bins < 1 {
        return Err(CliError::Usage("--bins must be at least 1".into()));
    }
    let hist_sink = Sink::open(a.histogram.as_ref()).map_err(CliError::Io)?;

    let digits = a.common.precision;
    let mut t = Table::new(digits);
    cavity_meta(&mut t, "unitary", &a.cavity);
    t.meta("t_max", format_float(a.t_max, 17));
    t.meta("dt", format_float(a.dt, 17));
    t.comment("fidelity_phipi: overlap with (|N,0> - |0,N>)/sqrt2");
    t.comment("renyi2: base-2, between the two cavities");
    let mut header: Vec<String> = ["t", "abs_c0", "abs_cN", "p_e", "fidelity_phi0", "fidelity_phipi", "delta", "renyi2"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    header.extend(a.phi.iter().map(|phi| format!("fidelity_phi_{}", format_float(*phi, digits))));
    t.header(&header);

    let scan = unitary_scan(&p, a.t_max, a.dt)?;
    let bound = ((p.n_photons + 1) as f64).log2() + TRACE_TOL;
    for r in &scan {
        let m = &r.measures;
        if !(r.renyi2 >= -TRACE_TOL && r.renyi2 <= bound) {
            return Err(CliError::Invariant(format!("entropy {} out of range at t = {}", r.renyi2, r.t)));
        }
        let mut row = vec![r.t, m.abs_c0, m.abs_cn, m.p_e, m.fidelity_phi0, m.fidelity_phipi, m.delta, r.renyi2];
        row.extend(a.phi.iter().map(|phi| noon_fidelity(r.c0, r.cn, p.n_photons, *phi)));
        t.row(&row);
    }

    if let Sink::File(_) = hist_sink {
        let hist = amplitude_visit_histogram(&scan, a.bins)?;
        let mut h = Table::new(digits);
        cavity_meta(&mut h, "unitary-histogram", &a.cavity);
        h.meta("bins", a.bins);
        h.comment("fraction of grid times with (|c0|, |cN|) in each occupied bin");
        h.header(&["abs_c0_lo", "abs_c0_hi", "abs_cN_lo", "abs_cN_hi", "weight"]);
        for (i, j, w) in hist.occupied() {
            let (a0, b0) = hist.bin_edges(i);
            let (a1, b1) = hist.bin_edges(j);
            h.row(&[a0, b0, a1, b1, w]);
        }
        hist_sink.write(&h).map_err(CliError::Io)?;
    }
    Ok(Outcome { table: t, extinct_at: None })
}

pub fn monitor(a: &MonitorArgs) -> Result<Outcome, CliError> {
    let p = cavity_params(&a.cavity)?;
    positive("tau", a.tau)?;
    if a.steps < 1 {
        return Err(CliError::Usage("--steps must be at least 1".into()));
    }
    let n = p.n_photons;
    let h = build_two_cavity_hamiltonian(&p)?;
    let psi0 = initial_state(n);
    let reference = match a.reference {
        Reference::Initial => psi0.clone(),
        Reference::Transferred => transferred_state(n),
    };
    let proto = MonitorProtocol::new(&h, a.tau, a.steps, reference)?;
    let traj = run_trajectory(&proto, &psi0, &[transferred_state(n)])?;

    let mut t = Table::new(a.common.precision);
    cavity_meta(&mut t, "monitor", &a.cavity);
    t.meta("tau", format_float(a.tau, 17));
    t.meta("steps", a.steps);
    t.meta(
        "reference",
        match a.reference {
            Reference::Initial => "|N,0>",
            Reference::Transferred => "|0,N>",
        },
    );
    t.comment("step m: unitary for m=1, then projection and unitary");
    t.comment("*_unnorm: from the unnormalized state; *_norm: divided by survival_norm");
    t.comment("transition target |0,N>; fidelity_phi0 and delta use the unnormalized state");
    t.header(&[
        "m",
        "survival_norm",
        "return_prob_unnorm",
        "return_prob_norm",
        "transition_prob_unnorm",
        "transition_prob_norm",
        "fidelity_phi0",
        "delta",
        "renyi2",
    ]);
    let mut last = f64::INFINITY;
    for s in &traj.steps {
        if s.survival_norm > last + SLACK {
            return Err(CliError::Invariant(format!("survival norm increased at m = {}", s.m)));
        }
        if let Some(o) = s.post_projection_overlap {
            if o > SLACK {
                return Err(CliError::Invariant(format!("overlap {o} after projection at m = {}", s.m)));
            }
        }
        last = s.survival_norm;
        let noon = noon_measures(s.state.amp(0), s.state.amp(n), n, 0.0);
        t.indexed_row(
            s.m,
            &[
                s.survival_norm,
                s.return_prob_unnorm,
                s.return_prob_norm,
                s.target_probs_unnorm[0],
                s.target_probs_norm[0],
                noon.fidelity_phi0,
                noon.delta,
                s.renyi2.unwrap_or(f64::NAN),
            ],
        );
    }
    if let Some(m) = traj.extinct_at {
        t.comment(&format!("EXTINCT m={m}"));
    }
    Ok(Outcome { table: t, extinct_at: traj.extinct_at })
}

pub fn jc(a: &JcArgs) -> Result<Outcome, CliError> {
    if a.nmax < 1 {
        return Err(CliError::Usage("--nmax must be at least 1".into()));
    }
    positive("omega", a.omega)?;
    finite("omega-a", a.omega_a)?;
    finite("coupling", a.coupling)?;
    let p = JcParams::new(a.omega, a.omega_a, a.coupling, a.nmax)?;
    let ens = match a.init {
        Some(n0) if n0 < 1 || n0 > a.nmax => {
            return Err(CliError::Usage(format!("--init must be in 1..={}", a.nmax)));
        }
        Some(n0) => JcEnsemble::single(n0),
        None => JcEnsemble::uniform_down(a.nmax),
    };
    let projector = match a.projector {
        Projector::Shared => ProjectorMode::Shared,
        Projector::PerMember => ProjectorMode::PerMember,
    };

    let mut t = Table::new(a.common.precision);
    t.meta("cavmon", env!("CARGO_PKG_VERSION"));
    t.meta("command", "jc");
    t.meta("nmax", a.nmax);
    t.meta("omega", format_float(a.omega, 17));
    t.meta("omega_a", format_float(a.omega_a, 17));
    t.meta("coupling", format_float(a.coupling, 17));
    t.comment("omega_a is recorded only; the block matrices do not contain it");
    t.comment("block n couples |up,n> and |down,n+1>; |down,1> is uncoupled with energy omega/2");
    t.meta("dimension", p.basis().dim());
    t.meta("photon_numbers", format!("1..{}", a.nmax + 1));
    match a.init {
        Some(n0) => t.meta("initial", format!("|down,{n0}>")),
        None => t.meta("initial", format!("uniform mixture of |down,n>, n=1..{}", a.nmax)),
    }

    let mut extinct_at = None;
    match a.mode {
        JcMode::Unitary => {
            positive("dt", a.dt)?;
            positive("t-max", a.t_max)?;
            if a.t_max < a.dt {
                return Err(CliError::Usage("--t-max must be at least --dt".into()));
            }
            t.meta("mode", "unitary");
            t.meta("t_max", format_float(a.t_max, 17));
            t.meta("dt", format_float(a.dt, 17));
            t.comment("time t in units of 1/omega");
            t.header(&["t", "renyi2", "trace_check", "mode"]);
            let scan = jc_entropy_scan(&p, &ens, JcScanMode::Unitary { t_max: a.t_max, dt: a.dt })?;
            for pt in scan {
                check_trace(pt.trace, pt.x)?;
                t.row_with_label(&[pt.x, pt.renyi2, pt.trace], "unitary");
            }
        }
        JcMode::Monitored => {
            positive("tau", a.tau)?;
            if a.steps < 1 {
                return Err(CliError::Usage("--steps must be at least 1".into()));
            }
            t.meta("mode", "monitored");
            t.meta("tau", format_float(a.tau, 17));
            t.comment("tau is the dimensionless product tau*omega");
            t.meta("steps", a.steps);
            match projector {
                ProjectorMode::Shared => t.meta(
                    "projector",
                    "shared: equal-amplitude superposition of the initial down states",
                ),
                ProjectorMode::PerMember => t.meta("projector", "per-member: each member's own initial state"),
            }
            t.header(&["m", "renyi2", "trace_check", "mode"]);
            let h = build_jc_hamiltonian(&p)?;
            let proto = MonitorProtocol::new(&h, a.tau, a.steps, default_reference(&p, &ens)?)?;
            let mut mon = JcMonitor::new(&p, &ens, &proto, projector)?;
            for m in 1..=a.steps {
                match mon.advance() {
                    Ok(()) => {}
                    Err(Error::Extinction { .. }) => {
                        extinct_at = Some(m);
                        t.comment(&format!("EXTINCT m={m}"));
                        break;
                    }
                    Err(e) => return Err(e.into()),
                }
                let photons = mon.photon_matrix()?;
                let trace = photons.trace();
                check_trace(trace, m as f64)?;
                t.indexed_row_with_label(m, &[renyi2_density(&photons)?, trace], "monitored");
            }
        }
    }
    Ok(Outcome { table: t, extinct_at })
}

fn check_trace(trace: f64, x: f64) -> Result<(), CliError> {
    if (trace - 1.0).abs() > TRACE_TOL {
        return Err(CliError::Invariant(format!("photon trace {trace} at {x}")));
    }
    Ok(())
}
