//! CSV layouts for fields and kernels, and parsing of named kernels.

use std::path::Path;

use chafee_core::control::{FilterKernel, Sign};
use chafee_core::spectral::SpectralField;

use crate::error::CliError;

/// Full-precision float formatting used in every output file.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn sign_label(sign: Sign) -> &'static str {
    match sign {
        Sign::Plus => "+",
        Sign::Minus => "-",
    }
}

pub fn parse_sign(s: &str) -> Result<Sign, String> {
    match s {
        "+" | "plus" | "+1" | "1" => Ok(Sign::Plus),
        "-" | "minus" | "-1" => Ok(Sign::Minus),
        _ => Err(format!("expected + or -, got '{s}'")),
    }
}

pub fn write_field(path: &Path, field: &SpectralField) -> Result<(), CliError> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["k", "a_k"])?;
    for (i, a) in field.coeffs().iter().enumerate() {
        w.write_record([(i + 1).to_string(), num(*a)])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_field(path: &Path) -> Result<SpectralField, CliError> {
    let mut r = csv::Reader::from_path(path)?;
    let mut coeffs = Vec::new();
    for record in r.records() {
        let record = record?;
        let k: usize = parse_cell(&record, 0, path)?;
        let a: f64 = parse_cell(&record, 1, path)?;
        if k == 0 {
            return Err(CliError::Usage(format!("{}: mode index 0", path.display())));
        }
        if coeffs.len() < k {
            coeffs.resize(k, 0.0);
        }
        coeffs[k - 1] = a;
    }
    SpectralField::new(coeffs).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

pub fn write_kernel(path: &Path, kernel: &FilterKernel) -> Result<(), CliError> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["m", "h_m"])?;
    for (i, h) in kernel.params().iter().enumerate() {
        w.write_record([(i + 1).to_string(), num(*h)])?;
    }
    w.write_record(["tail_value".to_string(), num(kernel.tail_value())])?;
    w.flush()?;
    Ok(())
}

pub fn read_kernel(path: &Path) -> Result<FilterKernel, CliError> {
    let mut r = csv::Reader::from_path(path)?;
    let mut params = Vec::new();
    let mut tail = 1.0;
    for record in r.records() {
        let record = record?;
        if record.get(0).map(str::trim) == Some("tail_value") {
            tail = parse_cell(&record, 1, path)?;
            continue;
        }
        let m: usize = parse_cell(&record, 0, path)?;
        let h: f64 = parse_cell(&record, 1, path)?;
        if m == 0 {
            return Err(CliError::Usage(format!(
                "{}: kernel index 0",
                path.display()
            )));
        }
        if params.len() < m {
            params.resize(m, tail);
        }
        params[m - 1] = h;
    }
    FilterKernel::new(params, tail).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn parse_cell<T: std::str::FromStr>(
    record: &csv::StringRecord,
    column: usize,
    path: &Path,
) -> Result<T, CliError> {
    record
        .get(column)
        .and_then(|s| s.trim().parse().ok())
        .ok_or_else(|| {
            CliError::Usage(format!(
                "{}: bad value in column {} of {:?}",
                path.display(),
                column + 1,
                record
            ))
        })
}

/// Kernel from its command-line name: `identity`, `reflection+`,
/// `reflection-`, `theorem`, `selective` or `file:<path>`. `lambda` is in
/// internal units.
pub fn build_kernel(
    name: &str,
    j: usize,
    lambda: f64,
    modes: usize,
) -> Result<FilterKernel, CliError> {
    Ok(match name {
        "identity" => FilterKernel::identity(modes),
        "reflection+" => FilterKernel::reflection(Sign::Plus, modes),
        "reflection-" => FilterKernel::reflection(Sign::Minus, modes),
        "theorem" => FilterKernel::theorem(lambda, modes),
        "selective" => {
            if j == 0 {
                return Err(CliError::Usage(
                    "the selective kernel needs a branch j ≥ 1".into(),
                ));
            }
            FilterKernel::selective(j, lambda, modes)
        }
        other => match other.strip_prefix("file:") {
            Some(path) => read_kernel(Path::new(path))?,
            None => return Err(CliError::Usage(format!("unknown kernel '{other}'"))),
        },
    })
}
