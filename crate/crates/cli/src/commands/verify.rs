use chafee_core::verify::{check_seed, plan, Expectation, SuiteEntry, SuiteOptions};
use clap::Args;
use serde::Serialize;

use crate::error::CliError;
use crate::run::RunDir;
use crate::Globals;

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Trial count for every randomized check.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub trials: Option<u64>,
    /// Also run deliberately violating inputs, which must fail.
    #[arg(long)]
    pub negative_controls: bool,
}

#[derive(Debug, Serialize)]
struct ReportJson<'a> {
    name: &'a str,
    passed: bool,
    worst_residual: f64,
    tolerance: f64,
    trials: usize,
    expected: &'static str,
    ok: bool,
    detail: &'a str,
}

impl<'a> From<&'a SuiteEntry> for ReportJson<'a> {
    fn from(e: &'a SuiteEntry) -> Self {
        Self {
            name: &e.report.name,
            passed: e.report.passed,
            worst_residual: e.report.worst_residual,
            tolerance: e.report.tolerance,
            trials: e.report.trials,
            expected: match e.expected {
                Expectation::Pass => "pass",
                Expectation::Fail => "fail",
            },
            ok: e.ok(),
            detail: &e.report.detail,
        }
    }
}

pub fn run(args: &VerifyArgs, globals: &Globals, run: &mut RunDir) -> Result<(), CliError> {
    let opts = SuiteOptions {
        seed: globals.seed,
        trials: args.trials.map(|t| t as usize),
        negative_controls: args.negative_controls,
        modes: globals.n_modes.unwrap_or(64),
    };
    run.param("trials", args.trials);
    run.param("negative_controls", args.negative_controls);
    run.param("n_modes", opts.modes);

    let checks = plan(&opts);
    let entries: Vec<SuiteEntry> = std::thread::scope(|s| {
        let handles: Vec<_> = checks
            .iter()
            .enumerate()
            .map(|(i, check)| {
                let opts = &opts;
                s.spawn(move || check.run(opts, check_seed(opts.seed, i)))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("check panicked"))
            .collect()
    });

    println!(
        "{:<4} {:<52} {:>12} {:>10} {:>7}  expected",
        "", "check", "residual", "tolerance", "trials"
    );
    for e in &entries {
        let r = &e.report;
        println!(
            "{:<4} {:<52} {:>12.3e} {:>10.1e} {:>7}  {}",
            if e.ok() { "ok" } else { "BAD" },
            r.name,
            r.worst_residual,
            r.tolerance,
            r.trials,
            if e.expected == Expectation::Pass {
                "pass"
            } else {
                "fail"
            }
        );
    }
    let json: Vec<ReportJson> = entries.iter().map(ReportJson::from).collect();
    run.json("suite.json", &json)?;

    let bad = entries.iter().filter(|e| !e.ok()).count();
    println!(
        "{} of {} checks as expected",
        entries.len() - bad,
        entries.len()
    );
    if bad == 0 {
        Ok(())
    } else {
        Err(CliError::Unsuccessful(format!(
            "{bad} checks did not behave as expected"
        )))
    }
}
