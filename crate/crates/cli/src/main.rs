//! `chafee`: batch experiments for the controlled Chafee–Infante equation.

mod commands;
mod config;
mod error;
mod formats;
mod run;
mod units;

use std::ffi::OsString;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{CommandFactory, FromArgMatches, Parser, Subcommand, ValueEnum};

use crate::error::CliError;
use crate::run::RunDir;
use crate::units::Units;

#[derive(Debug, Parser)]
#[command(
    name = "chafee",
    version,
    about = "Spectral-Galerkin experiments for u_t = u_xx + λu(1 − u²) with convolution feedback"
)]
pub struct Cli {
    /// Number of sine modes; defaults to a λ-dependent truncation.
    #[arg(long, global = true)]
    pub n_modes: Option<usize>,
    /// Master seed for randomized initial data and checks.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Parent directory of the run directories.
    #[arg(long, global = true, default_value = "runs")]
    pub out_dir: PathBuf,
    /// Scaling of λ, b and time: `eigen` (interval (0, π), λ_j = j²) or
    /// `paper-literal` (unit interval, λ_j = j²π²).
    #[arg(long, global = true, value_enum, default_value_t = Convention::Eigen)]
    pub lambda_convention: Convention,
    /// Flat key=value file supplying defaults for any long option.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Convention {
    Eigen,
    PaperLiteral,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Continue every branch born below `--lambda-max` and tabulate the diagram.
    Bifurcation(commands::bifurcation::BifurcationArgs),
    /// Compute one equilibrium `u_j`.
    Equilibrium(commands::equilibrium::EquilibriumArgs),
    /// Spectrum of the (controlled) linearization about `0` or `u_j`.
    Spectrum(commands::spectrum::SpectrumArgs),
    /// Integrate the controlled equation.
    Simulate(commands::simulate::SimulateArgs),
    /// Verdict plus perturbed run for a controlled equilibrium.
    Stabilize(commands::stabilize::StabilizeArgs),
    /// Run the verification suite.
    Verify(commands::verify::VerifyArgs),
    /// Regenerate the data behind the standard figures and tables.
    Reproduce(commands::reproduce::ReproduceArgs),
}

impl Command {
    fn name(&self) -> String {
        match self {
            Command::Bifurcation(_) => "bifurcation".into(),
            Command::Equilibrium(_) => "equilibrium".into(),
            Command::Spectrum(_) => "spectrum".into(),
            Command::Simulate(_) => "simulate".into(),
            Command::Stabilize(_) => "stabilize".into(),
            Command::Verify(_) => "verify".into(),
            Command::Reproduce(a) => format!("reproduce-{}", a.target.name()),
        }
    }
}

/// Options shared by every command after parsing.
#[derive(Debug, Clone)]
pub struct Globals {
    pub n_modes: Option<usize>,
    pub seed: u64,
    pub units: Units,
}

/// The parser used before configuration defaults are merged in, with every
/// argument optional.
fn lenient_command() -> clap::Command {
    Cli::command().mut_subcommands(|s| s.mut_args(|a| a.required(false)))
}

fn parse(args: Vec<OsString>) -> Result<Cli, clap::Error> {
    let matches = lenient_command().try_get_matches_from(&args)?;
    if matches.get_one::<PathBuf>("config").is_none() {
        let matches = Cli::command().try_get_matches_from(&args)?;
        return Cli::from_arg_matches(&matches);
    }
    let path = matches
        .get_one::<PathBuf>("config")
        .cloned()
        .expect("checked above");
    let entries = config::read(&path).map_err(|e| {
        Cli::command().error(
            clap::error::ErrorKind::Io,
            format!("{}: {e}", path.display()),
        )
    })?;
    let merged = config::merge(&Cli::command(), &matches, args, &entries)?;
    let matches = Cli::command().try_get_matches_from(merged)?;
    Cli::from_arg_matches(&matches)
}

fn execute(cli: Cli) -> Result<(), (CliError, Option<PathBuf>)> {
    let globals = Globals {
        n_modes: cli.n_modes,
        seed: cli.seed,
        units: Units::new(cli.lambda_convention),
    };
    if globals.n_modes == Some(0) {
        return Err((CliError::Usage("--n-modes must be positive".into()), None));
    }
    let mut run =
        RunDir::create(&cli.out_dir, &cli.command.name(), &globals).map_err(|e| (e, None))?;
    let result = match &cli.command {
        Command::Bifurcation(a) => commands::bifurcation::run(a, &globals, &mut run),
        Command::Equilibrium(a) => commands::equilibrium::run(a, &globals, &mut run),
        Command::Spectrum(a) => commands::spectrum::run(a, &globals, &mut run),
        Command::Simulate(a) => commands::simulate::run(a, &globals, &mut run),
        Command::Stabilize(a) => commands::stabilize::run(a, &globals, &mut run),
        Command::Verify(a) => commands::verify::run(a, &globals, &mut run),
        Command::Reproduce(a) => commands::reproduce::run(a, &globals, &mut run),
    };
    let code = match &result {
        Ok(()) => 0,
        Err(e) => e.exit_code(),
    };
    if let Err(e) = run.finish(code) {
        return Err((e, None));
    }
    result.map_err(|e| (e, Some(run.path().to_path_buf())))
}

fn main() -> ExitCode {
    let cli = match parse(std::env::args_os().collect()) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    ExitCode::SUCCESS
                }
                _ => ExitCode::from(error::EXIT_USAGE),
            };
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err((e, run)) => {
            eprintln!("chafee: {e}");
            if let Some(run) = run {
                eprintln!("chafee: outputs in {}", run.display());
            }
            ExitCode::from(e.exit_code())
        }
    }
}
