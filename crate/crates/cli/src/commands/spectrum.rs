use chafee_core::control::{ControlParams, Sign};
use chafee_core::equilibria::find_equilibrium;
use chafee_core::spectral::SpectralField;
use chafee_core::stability::{assemble, spectrum, verdict};
use clap::Args;

use super::{modes_for, positive_lambda, write_spectrum};
use crate::error::CliError;
use crate::formats::{build_kernel, parse_sign, sign_label};
use crate::run::RunDir;
use crate::Globals;

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    /// Branch index; 0 linearizes about u = 0.
    #[arg(long = "j", default_value_t = 0)]
    pub j: usize,
    #[arg(long)]
    pub lambda: f64,
    #[arg(long, default_value = "+", value_parser = parse_sign, allow_hyphen_values = true)]
    pub sign: Sign,
    /// Feedback gain b.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub gain: f64,
    /// identity, reflection+, reflection-, theorem, selective or file:<path>.
    #[arg(long, default_value = "identity")]
    pub kernel: String,
}

pub fn run(args: &SpectrumArgs, globals: &Globals, run: &mut RunDir) -> Result<(), CliError> {
    let units = globals.units;
    let lambda = positive_lambda(units.rate_in(args.lambda))?;
    let gain = units.rate_in(args.gain);
    let modes = modes_for(globals, lambda);
    run.param("j", args.j);
    run.param("lambda", args.lambda);
    run.param("sign", sign_label(args.sign));
    run.param("gain", args.gain);
    run.param("kernel", &args.kernel);
    run.param("n_modes", modes);

    let u = if args.j == 0 {
        SpectralField::zeros(modes)
    } else {
        find_equilibrium(lambda, args.j, args.sign, modes)?
    };
    let kernel = build_kernel(&args.kernel, args.j, lambda, modes)?;
    run.kernel("kernel.csv", &kernel)?;
    let params = ControlParams::new(gain, kernel);
    verdict(&u, lambda, &params, modes)?;
    write_spectrum(
        run,
        &spectrum(&assemble(&u, lambda, &params, modes)),
        &units,
    )?;
    Ok(())
}
