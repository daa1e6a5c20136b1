//! Run directories and their manifests.

use std::fs::{self, File};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use chafee_core::control::FilterKernel;
use chafee_core::spectral::SpectralField;
use serde::Serialize;
use serde_json::{Map, Value};

use crate::error::CliError;
use crate::{formats, Globals};

/// Output directory of one command invocation. Every file a command writes
/// goes through here and is listed in `manifest.json`.
#[derive(Debug)]
pub struct RunDir {
    path: PathBuf,
    command: String,
    globals: Map<String, Value>,
    parameters: Map<String, Value>,
    outputs: Vec<String>,
    started: f64,
}

fn unix_now() -> f64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs_f64())
        .unwrap_or(0.0)
}

impl RunDir {
    pub fn create(out_dir: &Path, command: &str, globals: &Globals) -> Result<Self, CliError> {
        let path = out_dir.join(command);
        fs::create_dir_all(&path)?;
        let mut g = Map::new();
        g.insert("n_modes".into(), serde_json::to_value(globals.n_modes)?);
        g.insert("seed".into(), globals.seed.into());
        g.insert("lambda_convention".into(), globals.units.name().into());
        Ok(Self {
            path,
            command: command.to_string(),
            globals: g,
            parameters: Map::new(),
            outputs: Vec::new(),
            started: unix_now(),
        })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    /// Records a resolved parameter in the manifest.
    pub fn param(&mut self, key: &str, value: impl Serialize) {
        let value = serde_json::to_value(value).unwrap_or(Value::Null);
        self.parameters.insert(key.to_string(), value);
    }

    fn register(&mut self, name: &str) -> PathBuf {
        if !self.outputs.iter().any(|o| o == name) {
            self.outputs.push(name.to_string());
        }
        self.path.join(name)
    }

    pub fn csv(&mut self, name: &str) -> Result<csv::Writer<File>, CliError> {
        let path = self.register(name);
        Ok(csv::Writer::from_path(path)?)
    }

    pub fn json(&mut self, name: &str, value: &impl Serialize) -> Result<(), CliError> {
        let path = self.register(name);
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        fs::write(path, text)?;
        Ok(())
    }

    pub fn field(&mut self, name: &str, field: &SpectralField) -> Result<(), CliError> {
        let path = self.register(name);
        formats::write_field(&path, field)
    }

    pub fn kernel(&mut self, name: &str, kernel: &FilterKernel) -> Result<(), CliError> {
        let path = self.register(name);
        formats::write_kernel(&path, kernel)
    }

    /// Writes `manifest.json`.
    pub fn finish(&self, exit_code: u8) -> Result<(), CliError> {
        let manifest = serde_json::json!({
            "command": self.command,
            "version": env!("CARGO_PKG_VERSION"),
            "globals": self.globals,
            "parameters": self.parameters,
            "outputs": self.outputs,
            "exit_code": exit_code,
            "started_unix": self.started,
            "finished_unix": unix_now(),
        });
        let mut text = serde_json::to_string_pretty(&manifest)?;
        text.push('\n');
        fs::write(self.path.join("manifest.json"), text)?;
        Ok(())
    }
}
