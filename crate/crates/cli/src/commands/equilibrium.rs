use chafee_core::control::{ControlParams, Sign};
use chafee_core::equilibria::{count_zeros, find_equilibrium, residual};
use chafee_core::spectral::sobolev_norm;
use chafee_core::stability::{assemble, spectrum};
use clap::Args;
use serde::Serialize;

use super::{modes_for, positive_lambda, sup_norm, write_profiles};
use crate::error::CliError;
use crate::formats::{parse_sign, sign_label};
use crate::run::RunDir;
use crate::Globals;

#[derive(Debug, Args)]
pub struct EquilibriumArgs {
    /// Branch index (number of interior zeros plus one).
    #[arg(long = "j", value_parser = clap::value_parser!(u64).range(1..))]
    pub j: u64,
    #[arg(long)]
    pub lambda: f64,
    /// Sign of u'(0).
    #[arg(long, default_value = "+", value_parser = parse_sign, allow_hyphen_values = true)]
    pub sign: Sign,
}

#[derive(Debug, Serialize)]
struct Summary {
    j: usize,
    lambda: f64,
    sign: &'static str,
    n_modes: usize,
    zero_count: usize,
    morse_index: usize,
    sup_norm: f64,
    residual: f64,
}

pub fn run(args: &EquilibriumArgs, globals: &Globals, run: &mut RunDir) -> Result<(), CliError> {
    let j = args.j as usize;
    let lambda = positive_lambda(globals.units.rate_in(args.lambda))?;
    let modes = modes_for(globals, lambda);
    run.param("j", j);
    run.param("lambda", args.lambda);
    run.param("sign", sign_label(args.sign));
    run.param("n_modes", modes);

    let u = find_equilibrium(lambda, j, args.sign, modes)?;
    run.field("equilibrium.csv", &u)?;
    write_profiles(run, "profile.csv", &[format!("u_{j}")], &[&u])?;
    let report = spectrum(&assemble(
        &u,
        lambda,
        &ControlParams::uncontrolled(modes),
        modes,
    ));
    let summary = Summary {
        j,
        lambda: args.lambda,
        sign: sign_label(args.sign),
        n_modes: modes,
        zero_count: count_zeros(&u),
        morse_index: report.morse_index,
        sup_norm: sup_norm(&u),
        residual: sobolev_norm(&residual(&u, lambda), 0.0),
    };
    run.json("summary.json", &summary)?;
    Ok(())
}
