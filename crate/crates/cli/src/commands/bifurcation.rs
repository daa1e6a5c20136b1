use chafee_core::equilibria::{
    bifurcation_value, continue_branch, trivial_morse_index, EquilibriumBranch,
};
use clap::Args;

use super::{modes_for, positive_lambda, sup_norm};
use crate::error::CliError;
use crate::formats::{num, sign_label};
use crate::run::RunDir;
use crate::units::Units;
use crate::Globals;

#[derive(Debug, Args)]
pub struct BifurcationArgs {
    /// Largest λ of the diagram.
    #[arg(long)]
    pub lambda_max: f64,
    /// Continuation steps per branch.
    #[arg(long, default_value_t = 40, value_parser = clap::value_parser!(u64).range(1..))]
    pub steps: u64,
}

const TRIVIAL_SAMPLES: usize = 200;

pub fn run(args: &BifurcationArgs, globals: &Globals, run: &mut RunDir) -> Result<(), CliError> {
    let lambda_max = positive_lambda(globals.units.rate_in(args.lambda_max))?;
    let modes = modes_for(globals, lambda_max);
    run.param("lambda_max", args.lambda_max);
    run.param("steps", args.steps);
    run.param("n_modes", modes);
    let branches = compute(lambda_max, args.steps as usize, modes)?;
    write(run, &globals.units, lambda_max, &branches)
}

/// Every branch `j` with `j² < lambda_max`, continued in parallel.
pub fn compute(
    lambda_max: f64,
    steps: usize,
    modes: usize,
) -> Result<Vec<EquilibriumBranch>, CliError> {
    let born: Vec<usize> = (1..)
        .take_while(|&j| bifurcation_value(j) < lambda_max)
        .collect();
    let results: Vec<_> = std::thread::scope(|s| {
        let handles: Vec<_> = born
            .iter()
            .map(|&j| {
                s.spawn(move || {
                    let onset = bifurcation_value(j);
                    let start = onset + (lambda_max - onset) / (steps as f64 + 1.0);
                    continue_branch(j, start, lambda_max, steps, modes)
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("branch worker panicked"))
            .collect()
    });
    results
        .into_iter()
        .map(|r| r.map_err(CliError::from))
        .collect()
}

pub fn write(
    run: &mut RunDir,
    units: &Units,
    lambda_max: f64,
    branches: &[EquilibriumBranch],
) -> Result<(), CliError> {
    let mut w = run.csv("trivial_branch.csv")?;
    w.write_record(["lambda", "morse_index"])?;
    for i in 0..=TRIVIAL_SAMPLES {
        let lambda = lambda_max * i as f64 / TRIVIAL_SAMPLES as f64;
        w.write_record([
            num(units.rate_out(lambda)),
            trivial_morse_index(lambda).to_string(),
        ])?;
    }
    w.flush()?;

    let mut diagram = run.csv("diagram.csv")?;
    diagram.write_record(["lambda", "branch_j", "sup_norm"])?;
    for i in 0..=TRIVIAL_SAMPLES {
        let lambda = lambda_max * i as f64 / TRIVIAL_SAMPLES as f64;
        diagram.write_record([num(units.rate_out(lambda)), "0".into(), num(0.0)])?;
    }

    for branch in branches {
        let j = branch.j;
        diagram.write_record([
            num(units.rate_out(bifurcation_value(j))),
            j.to_string(),
            num(0.0),
        ])?;
        for s in &branch.samples {
            diagram.write_record([
                num(units.rate_out(s.lambda)),
                j.to_string(),
                num(sup_norm(&s.field)),
            ])?;
        }

        let mut w = run.csv(&format!("branch_j{j}.csv"))?;
        let modes = branch.samples.first().map_or(0, |s| s.field.truncation());
        let mut header = vec![
            "j".to_string(),
            "lambda".into(),
            "sign".into(),
            "morse_index".into(),
        ];
        header.extend((1..=modes).map(|k| format!("a_{k}")));
        w.write_record(&header)?;
        for half in [branch.clone(), branch.mirrored()] {
            for s in &half.samples {
                let mut row = vec![
                    j.to_string(),
                    num(units.rate_out(s.lambda)),
                    sign_label(s.sign).to_string(),
                    s.morse_index.to_string(),
                ];
                row.extend(s.field.coeffs().iter().map(|a| num(*a)));
                w.write_record(&row)?;
            }
        }
        w.flush()?;
    }
    diagram.flush()?;
    Ok(())
}
