use chafee_core::control::{FilterKernel, Sign};
use chafee_core::equilibria::{bifurcation_value, find_equilibrium};
use chafee_core::stability::theorem_spectrum;
use clap::{Args, ValueEnum};
use serde::Serialize;

use super::{bifurcation, modes_for, write_profiles};
use crate::error::CliError;
use crate::formats::num;
use crate::run::RunDir;
use crate::Globals;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Target {
    /// u_1, u_2, u_3 at λ = 10 with their leading sine modes.
    Fig1,
    /// Bifurcation diagram up to λ = 30.
    Fig2,
    /// Closed-form spectra μ_k about u = 0 at λ = λ_j, b = −λ_j/2 − 1.
    Theorem,
}

impl Target {
    pub fn name(self) -> &'static str {
        match self {
            Target::Fig1 => "fig1",
            Target::Fig2 => "fig2",
            Target::Theorem => "theorem",
        }
    }
}

#[derive(Debug, Args)]
pub struct ReproduceArgs {
    #[arg(value_enum)]
    pub target: Target,
}

const FIG1_LAMBDA: f64 = 10.0;
const FIG1_MODES_SHOWN: usize = 9;
const FIG2_LAMBDA_MAX: f64 = 30.0;
const FIG2_STEPS: usize = 60;
const THEOREM_MODES: usize = 16;

pub fn run(args: &ReproduceArgs, globals: &Globals, run: &mut RunDir) -> Result<(), CliError> {
    run.param("target", args.target.name());
    match args.target {
        Target::Fig1 => fig1(globals, run),
        Target::Fig2 => {
            let modes = modes_for(globals, FIG2_LAMBDA_MAX);
            run.param("lambda_max", globals.units.rate_out(FIG2_LAMBDA_MAX));
            run.param("steps", FIG2_STEPS);
            run.param("n_modes", modes);
            let branches = bifurcation::compute(FIG2_LAMBDA_MAX, FIG2_STEPS, modes)?;
            bifurcation::write(run, &globals.units, FIG2_LAMBDA_MAX, &branches)
        }
        Target::Theorem => theorem(globals, run),
    }
}

fn fig1(globals: &Globals, run: &mut RunDir) -> Result<(), CliError> {
    let modes = globals.n_modes.unwrap_or(64);
    run.param("lambda", globals.units.rate_out(FIG1_LAMBDA));
    run.param("n_modes", modes);
    let mut fields = Vec::new();
    for j in 1..=3 {
        let u = find_equilibrium(FIG1_LAMBDA, j, Sign::Plus, modes)?;
        let mut w = run.csv(&format!("fig1_u{j}_modes.csv"))?;
        w.write_record(["k", "a_k"])?;
        for k in 1..=FIG1_MODES_SHOWN {
            w.write_record([k.to_string(), num(u.coeff(k))])?;
        }
        w.flush()?;
        fields.push(u);
    }
    let labels: Vec<String> = (1..=3).map(|j| format!("u_{j}")).collect();
    let refs: Vec<_> = fields.iter().collect();
    write_profiles(run, "fig1_profiles.csv", &labels, &refs)
}

#[derive(Debug, Serialize)]
struct TheoremRow {
    j: usize,
    kernel: &'static str,
    lambda: f64,
    gain: f64,
    max_mu: f64,
}

fn theorem(globals: &Globals, run: &mut RunDir) -> Result<(), CliError> {
    let units = globals.units;
    let modes = globals.n_modes.unwrap_or(THEOREM_MODES);
    run.param("n_modes", modes);
    let mut w = run.csv("theorem.csv")?;
    w.write_record(["j", "kernel", "lambda", "gain", "k", "mu_k"])?;
    let mut rows = Vec::new();
    for j in 1..=4 {
        let lambda = bifurcation_value(j);
        let gain = -lambda / 2.0 - 1.0;
        for (label, kernel) in [
            ("theorem", FilterKernel::theorem(lambda, modes)),
            ("selective", FilterKernel::selective(j, lambda, modes)),
        ] {
            let mu = theorem_spectrum(lambda, gain, &kernel, modes);
            for (k, m) in mu.iter().enumerate() {
                w.write_record([
                    j.to_string(),
                    label.to_string(),
                    num(units.rate_out(lambda)),
                    num(units.rate_out(gain)),
                    (k + 1).to_string(),
                    num(units.rate_out(*m)),
                ])?;
            }
            rows.push(TheoremRow {
                j,
                kernel: label,
                lambda: units.rate_out(lambda),
                gain: units.rate_out(gain),
                max_mu: units.rate_out(mu.iter().cloned().fold(f64::NEG_INFINITY, f64::max)),
            });
        }
    }
    w.flush()?;
    run.json("theorem.json", &rows)
}
