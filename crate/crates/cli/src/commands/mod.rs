pub mod bifurcation;
pub mod equilibrium;
pub mod reproduce;
pub mod simulate;
pub mod spectrum;
pub mod stabilize;
pub mod verify;

use chafee_core::spectral::{synthesize, SpectralField};
use chafee_core::stability::{recommended_truncation, LinearizationReport};
use serde::Serialize;

use crate::error::CliError;
use crate::formats::num;
use crate::run::RunDir;
use crate::units::Units;
use crate::Globals;

/// Truncation for internal parameter `lambda`, unless `--n-modes` is given.
pub fn modes_for(globals: &Globals, lambda: f64) -> usize {
    globals
        .n_modes
        .unwrap_or_else(|| recommended_truncation(lambda))
}

pub fn positive_lambda(lambda: f64) -> Result<f64, CliError> {
    if lambda.is_finite() && lambda > 0.0 {
        Ok(lambda)
    } else {
        Err(CliError::Usage(format!(
            "λ must be positive and finite, got {lambda}"
        )))
    }
}

pub fn sup_norm(field: &SpectralField) -> f64 {
    synthesize(field, 16 * field.truncation()).sup_norm()
}

/// `u(x)` at `x = iπ/points`, endpoints included.
pub fn profile(field: &SpectralField, points: usize) -> Vec<(f64, f64)> {
    let interior = synthesize(field, points - 1);
    let mut out = vec![(0.0, 0.0)];
    for (i, &v) in interior.values().iter().enumerate() {
        out.push((interior.abscissa(i + 1), v));
    }
    out.push((std::f64::consts::PI, 0.0));
    out
}

pub fn write_profiles(
    run: &mut RunDir,
    name: &str,
    labels: &[String],
    fields: &[&SpectralField],
) -> Result<(), CliError> {
    let columns: Vec<Vec<(f64, f64)>> = fields.iter().map(|f| profile(f, 256)).collect();
    let mut w = run.csv(name)?;
    let mut header = vec!["x".to_string()];
    header.extend(labels.iter().cloned());
    w.write_record(&header)?;
    for i in 0..columns[0].len() {
        let mut row = vec![num(columns[0][i].0)];
        row.extend(columns.iter().map(|c| num(c[i].1)));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Serialize)]
pub struct SpectrumJson {
    pub eigenvalues: Vec<f64>,
    pub morse_index: usize,
    pub margin: f64,
    pub zero_counts: Vec<usize>,
}

/// `spectrum.csv` (`n,mu_n`) and `report.json`, eigenvalues in user units.
pub fn write_spectrum(
    run: &mut RunDir,
    report: &LinearizationReport,
    units: &Units,
) -> Result<SpectrumJson, CliError> {
    let eigenvalues: Vec<f64> = report
        .eigenvalues
        .iter()
        .map(|&m| units.rate_out(m))
        .collect();
    let mut w = run.csv("spectrum.csv")?;
    w.write_record(["n", "mu_n"])?;
    for (n, mu) in eigenvalues.iter().enumerate() {
        w.write_record([(n + 1).to_string(), num(*mu)])?;
    }
    w.flush()?;
    let json = SpectrumJson {
        eigenvalues,
        morse_index: report.morse_index,
        margin: units.rate_out(report.margin),
        zero_counts: report.zero_counts.clone(),
    };
    run.json("report.json", &json)?;
    Ok(json)
}
