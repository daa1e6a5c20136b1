use chafee_core::control::{ControlParams, Sign};
use chafee_core::equilibria::find_equilibrium;
use chafee_core::stability::{assemble, spectrum, verdict};
use chafee_core::timestepping::{
    measure_decay_rate, simulate, InitialCondition, SimConfig, Trajectory,
};
use clap::Args;
use serde::Serialize;

use super::simulate::write_trajectory;
use super::{modes_for, positive_lambda, write_spectrum};
use crate::error::CliError;
use crate::formats::{build_kernel, parse_sign, sign_label};
use crate::run::RunDir;
use crate::Globals;

#[derive(Debug, Args)]
pub struct StabilizeArgs {
    #[arg(long = "j", value_parser = clap::value_parser!(u64).range(1..))]
    pub j: u64,
    #[arg(long)]
    pub lambda: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub gain: f64,
    #[arg(long, default_value = "selective")]
    pub kernel: String,
    #[arg(long, default_value = "+", value_parser = parse_sign, allow_hyphen_values = true)]
    pub sign: Sign,
    /// Amplitude of the `sin(mode·x)` perturbation of the initial state.
    #[arg(long, default_value_t = 0.01, allow_negative_numbers = true)]
    pub perturbation: f64,
    #[arg(long, default_value_t = 1)]
    pub perturb_mode: usize,
    #[arg(long, default_value_t = 200.0)]
    pub horizon: f64,
    #[arg(long, default_value_t = 0.01)]
    pub dt: f64,
}

/// Final distance below which a run counts as converged.
const ARRIVAL: f64 = 1e-6;

#[derive(Debug, Serialize)]
struct Summary {
    stabilized: bool,
    margin: f64,
    measured_rate: Option<f64>,
    final_distance: f64,
    final_control_norm: f64,
}

/// Fitted exponential rate while the distance lies in `[1e-10, 1e-1]`.
fn fitted_rate(traj: &Trajectory) -> Option<f64> {
    let inside: Vec<f64> = traj
        .times
        .iter()
        .zip(&traj.distances)
        .take_while(|(_, &d)| d <= 1e-1)
        .filter(|(_, &d)| d >= 1e-10)
        .map(|(&t, _)| t)
        .collect();
    let (&first, &last) = (inside.first()?, inside.last()?);
    measure_decay_rate(traj, (first, last)).ok()
}

pub fn run(args: &StabilizeArgs, globals: &Globals, run: &mut RunDir) -> Result<(), CliError> {
    let units = globals.units;
    let j = args.j as usize;
    let lambda = positive_lambda(units.rate_in(args.lambda))?;
    let gain = units.rate_in(args.gain);
    let modes = modes_for(globals, lambda);
    run.param("j", j);
    run.param("lambda", args.lambda);
    run.param("gain", args.gain);
    run.param("kernel", &args.kernel);
    run.param("sign", sign_label(args.sign));
    run.param("perturbation", args.perturbation);
    run.param("perturb_mode", args.perturb_mode);
    run.param("horizon", args.horizon);
    run.param("dt", args.dt);
    run.param("n_modes", modes);

    let u = find_equilibrium(lambda, j, args.sign, modes)?;
    run.field("equilibrium.csv", &u)?;
    let kernel = build_kernel(&args.kernel, j, lambda, modes)?;
    run.kernel("kernel.csv", &kernel)?;
    let params = ControlParams::new(gain, kernel);
    let outcome = verdict(&u, lambda, &params, modes)?;
    write_spectrum(
        run,
        &spectrum(&assemble(&u, lambda, &params, modes)),
        &units,
    )?;

    let cfg = SimConfig {
        modes,
        dt: units.time_in(args.dt),
        horizon: units.time_in(args.horizon),
        lambda,
        control: params,
        initial: InitialCondition::PerturbedEquilibrium {
            j,
            sign: args.sign,
            mode: args.perturb_mode,
            amplitude: args.perturbation,
        },
        record_every: ((0.1 / args.dt).round() as usize).max(1),
    };
    cfg.validate()?;
    let traj = simulate(&cfg, &u)?;
    write_trajectory(run, &traj, &units, units.rate_out(1.0))?;

    let final_distance = *traj.distances.last().unwrap_or(&f64::INFINITY);
    let final_control_norm = units.rate_out(*traj.control_norms.last().unwrap_or(&f64::INFINITY));
    let stabilized = outcome.is_stable() && final_distance < ARRIVAL;
    let summary = Summary {
        stabilized,
        margin: units.rate_out(outcome.margin()),
        measured_rate: fitted_rate(&traj).map(|r| units.rate_out(r)),
        final_distance,
        final_control_norm,
    };
    run.json("summary.json", &summary)?;
    if stabilized {
        Ok(())
    } else {
        Err(CliError::Unsuccessful(format!(
            "not stabilized (margin {:.4e}, final distance {final_distance:.3e})",
            summary.margin
        )))
    }
}
