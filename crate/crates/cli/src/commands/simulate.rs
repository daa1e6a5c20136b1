use std::path::Path;

use chafee_core::control::{ControlParams, Sign};
use chafee_core::equilibria::find_equilibrium;
use chafee_core::spectral::SpectralField;
use chafee_core::timestepping::{simulate, InitialCondition, SimConfig, Trajectory};
use clap::Args;

use super::{modes_for, positive_lambda};
use crate::error::CliError;
use crate::formats::{build_kernel, num, parse_sign, read_field};
use crate::run::RunDir;
use crate::units::Units;
use crate::Globals;

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub lambda: f64,
    #[arg(long, default_value_t = 0.01)]
    pub dt: f64,
    #[arg(long)]
    pub horizon: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub gain: f64,
    #[arg(long, default_value = "identity")]
    pub kernel: String,
    /// Branch used by the `selective` kernel.
    #[arg(long = "kernel-j", default_value_t = 0)]
    pub kernel_j: usize,
    /// zero, mode:K:AMP, equilibrium:J:SIGN:MODE:AMP, random:AMP or file:PATH.
    #[arg(long, allow_hyphen_values = true)]
    pub initial: String,
    /// zero or equilibrium:J:SIGN; distances are measured to this state.
    #[arg(long, default_value = "zero", allow_hyphen_values = true)]
    pub target: String,
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
    pub record_every: u64,
    /// Also write every recorded state to snapshots.csv.
    #[arg(long)]
    pub snapshots: bool,
}

fn bad(spec: &str, what: &str) -> CliError {
    CliError::Usage(format!("cannot parse {what} '{spec}'"))
}

fn field_part<T: std::str::FromStr>(
    parts: &[&str],
    i: usize,
    spec: &str,
    what: &str,
) -> Result<T, CliError> {
    parts
        .get(i)
        .and_then(|p| p.parse().ok())
        .ok_or_else(|| bad(spec, what))
}

pub fn parse_initial(spec: &str, seed: u64) -> Result<InitialCondition, CliError> {
    let parts: Vec<&str> = spec.split(':').collect();
    let what = "initial condition";
    Ok(match parts[0] {
        "zero" => InitialCondition::Coefficients(SpectralField::zeros(1)),
        "mode" if parts.len() == 3 => InitialCondition::Mode {
            k: field_part(&parts, 1, spec, what)?,
            amplitude: field_part(&parts, 2, spec, what)?,
        },
        "equilibrium" if parts.len() == 5 => InitialCondition::PerturbedEquilibrium {
            j: field_part(&parts, 1, spec, what)?,
            sign: parse_sign(parts[2]).map_err(|_| bad(spec, what))?,
            mode: field_part(&parts, 3, spec, what)?,
            amplitude: field_part(&parts, 4, spec, what)?,
        },
        "random" if parts.len() == 2 => InitialCondition::Random {
            amplitude: field_part(&parts, 1, spec, what)?,
            seed,
        },
        "file" if parts.len() >= 2 => {
            InitialCondition::Coefficients(read_field(Path::new(&spec["file:".len()..]))?)
        }
        _ => return Err(bad(spec, what)),
    })
}

pub fn parse_target(spec: &str, lambda: f64, modes: usize) -> Result<SpectralField, CliError> {
    let parts: Vec<&str> = spec.split(':').collect();
    match parts.as_slice() {
        ["zero"] => Ok(SpectralField::zeros(modes)),
        ["equilibrium", j, sign] => {
            let j: usize = j.parse().map_err(|_| bad(spec, "target"))?;
            let sign: Sign = parse_sign(sign).map_err(|_| bad(spec, "target"))?;
            Ok(find_equilibrium(lambda, j, sign, modes)?)
        }
        _ => Err(bad(spec, "target")),
    }
}

pub fn write_trajectory(
    run: &mut RunDir,
    traj: &Trajectory,
    units: &Units,
    gain_scale: f64,
) -> Result<(), CliError> {
    let mut w = run.csv("trajectory.csv")?;
    w.write_record(["t", "distance", "control_norm"])?;
    for i in 0..traj.len() {
        w.write_record([
            num(units.time_out(traj.times[i])),
            num(traj.distances[i]),
            num(gain_scale * traj.control_norms[i]),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn run(args: &SimulateArgs, globals: &Globals, run: &mut RunDir) -> Result<(), CliError> {
    let units = globals.units;
    let lambda = positive_lambda(units.rate_in(args.lambda))?;
    let modes = modes_for(globals, lambda);
    run.param("lambda", args.lambda);
    run.param("dt", args.dt);
    run.param("horizon", args.horizon);
    run.param("gain", args.gain);
    run.param("kernel", &args.kernel);
    run.param("kernel_j", args.kernel_j);
    run.param("initial", &args.initial);
    run.param("target", &args.target);
    run.param("record_every", args.record_every);
    run.param("n_modes", modes);

    let kernel = build_kernel(&args.kernel, args.kernel_j, lambda, modes)?;
    run.kernel("kernel.csv", &kernel)?;
    let cfg = SimConfig {
        modes,
        dt: units.time_in(args.dt),
        horizon: units.time_in(args.horizon),
        lambda,
        control: ControlParams::new(units.rate_in(args.gain), kernel),
        initial: parse_initial(&args.initial, globals.seed)?,
        record_every: args.record_every as usize,
    };
    cfg.validate()?;
    let target = parse_target(&args.target, lambda, modes)?;
    let traj = simulate(&cfg, &target)?;
    write_trajectory(run, &traj, &units, units.rate_out(1.0))?;
    if let Some(last) = traj.final_state() {
        run.field("final.csv", last)?;
    }
    if args.snapshots {
        let mut w = run.csv("snapshots.csv")?;
        let mut header = vec!["t".to_string()];
        header.extend((1..=modes).map(|k| format!("a_{k}")));
        w.write_record(&header)?;
        for (t, state) in traj.times.iter().zip(&traj.states) {
            let mut row = vec![num(units.time_out(*t))];
            row.extend(state.coeffs().iter().map(|a| num(*a)));
            w.write_record(&row)?;
        }
        w.flush()?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn initial_condition_specs() {
        assert_eq!(
            parse_initial("mode:2:0.5", 0).unwrap(),
            InitialCondition::Mode {
                k: 2,
                amplitude: 0.5
            }
        );
        assert_eq!(
            parse_initial("equilibrium:2:-:1:0.01", 0).unwrap(),
            InitialCondition::PerturbedEquilibrium {
                j: 2,
                sign: Sign::Minus,
                mode: 1,
                amplitude: 0.01
            }
        );
        assert_eq!(
            parse_initial("random:1e-3", 7).unwrap(),
            InitialCondition::Random {
                amplitude: 1e-3,
                seed: 7
            }
        );
        assert!(parse_initial("mode:2", 0).is_err());
        assert!(parse_initial("sphere", 0).is_err());
    }
}
