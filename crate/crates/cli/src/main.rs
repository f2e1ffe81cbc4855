//! `cavmon`: CSV datasets for two coupled cavities and a cavity-qubit system,
//! with and without repeated projective measurements.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use commands::CliError;
use output::Sink;

#[derive(Parser, Debug)]
#[command(name = "cavmon", version, about = "Monitored photon dynamics in coupled cavities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Unitary evolution of |N,0> between two cavities.
    Unitary(UnitaryArgs),
    /// Two cavities with the reference state projected out every tau.
    Monitor(MonitorArgs),
    /// One cavity coupled to a qubit: photon entropy.
    Jc(JcArgs),
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Significant digits for floats.
    #[arg(long, default_value_t = 12)]
    pub precision: usize,
    /// Output file; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Hopping {
    /// Level spacing J.
    SpacingJ,
    /// Unscaled hopping, level spacing 2J.
    Literal,
}

#[derive(Args, Debug, Clone)]
pub struct CavityArgs {
    /// Total photon number N.
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    /// Hopping strength J.
    #[arg(long, default_value_t = 1.0)]
    pub j: f64,
    /// Cavity frequency.
    #[arg(long, default_value_t = 0.0)]
    pub omega0: f64,
    #[arg(long, value_enum, default_value_t = Hopping::SpacingJ)]
    pub hopping: Hopping,
}

#[derive(Args, Debug, Clone)]
pub struct UnitaryArgs {
    #[command(flatten)]
    pub cavity: CavityArgs,
    #[arg(long, default_value = "6.2832")]
    pub t_max: f64,
    #[arg(long, default_value_t = 0.01)]
    pub dt: f64,
    /// Extra N00N phases; adds one fidelity column each.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub phi: Vec<f64>,
    /// Also write the (|c0|, |cN|) visit histogram here.
    #[arg(long)]
    pub histogram: Option<PathBuf>,
    #[arg(long, default_value_t = 50)]
    pub bins: usize,
    #[command(flatten)]
    pub common: Common,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reference {
    /// Project out |N,0>.
    Initial,
    /// Project out |0,N>.
    Transferred,
}

#[derive(Args, Debug, Clone)]
pub struct MonitorArgs {
    #[command(flatten)]
    pub cavity: CavityArgs,
    /// Time between measurements.
    #[arg(long, default_value_t = 0.5)]
    pub tau: f64,
    #[arg(long, default_value_t = 100)]
    pub steps: usize,
    #[arg(long, value_enum, default_value_t = Reference::Initial)]
    pub reference: Reference,
    #[command(flatten)]
    pub common: Common,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum JcMode {
    Unitary,
    Monitored,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Projector {
    /// One reference state for the whole ensemble.
    Shared,
    /// Every member projects out its own initial state.
    PerMember,
}

#[derive(Args, Debug, Clone)]
pub struct JcArgs {
    /// Number of blocks N.
    #[arg(long, default_value_t = 15)]
    pub nmax: usize,
    #[arg(long, default_value_t = 1.0)]
    pub omega: f64,
    /// Qubit frequency (recorded, does not enter the dynamics).
    #[arg(long, default_value_t = 1.0)]
    pub omega_a: f64,
    #[arg(long, default_value_t = 0.1)]
    pub coupling: f64,
    #[arg(long, value_enum, default_value_t = JcMode::Unitary)]
    pub mode: JcMode,
    #[arg(long, default_value_t = 200.0)]
    pub t_max: f64,
    #[arg(long, default_value_t = 0.1)]
    pub dt: f64,
    /// Dimensionless tau * omega.
    #[arg(long, default_value_t = 1.0)]
    pub tau: f64,
    #[arg(long, default_value_t = 300)]
    pub steps: usize,
    /// Start in |down,n0> instead of the uniform down-state mixture.
    #[arg(long)]
    pub init: Option<usize>,
    #[arg(long, value_enum, default_value_t = Projector::Shared)]
    pub projector: Projector,
    #[command(flatten)]
    pub common: Common,
}

fn run(cli: Cli) -> Result<(), CliError> {
    let (common, outcome) = match &cli.command {
        Command::Unitary(a) => {
            commands::check_common(&a.common)?;
            let sink = Sink::open(a.common.out.as_ref()).map_err(CliError::Io)?;
            (sink, commands::unitary(a)?)
        }
        Command::Monitor(a) => {
            commands::check_common(&a.common)?;
            let sink = Sink::open(a.common.out.as_ref()).map_err(CliError::Io)?;
            (sink, commands::monitor(a)?)
        }
        Command::Jc(a) => {
            commands::check_common(&a.common)?;
            let sink = Sink::open(a.common.out.as_ref()).map_err(CliError::Io)?;
            (sink, commands::jc(a)?)
        }
    };
    common.write(&outcome.table).map_err(CliError::Io)?;
    match outcome.extinct_at {
        Some(step) => Err(CliError::Extinct(step)),
        None => Ok(()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("cavmon: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
