//! CSV helpers and run manifests.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Duration;

use chrono::{DateTime, SecondsFormat, Utc};
use geonet::ConnectionModel;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::CliError;

/// Shortest round-trip decimal form; blank for `None` and non-finite values.
pub fn num(x: Option<f64>) -> String {
    match x {
        Some(v) if v.is_finite() => format!("{v}"),
        _ => String::new(),
    }
}

pub fn eta_field(model: &ConnectionModel) -> String {
    if model.is_disk() {
        "inf".to_string()
    } else {
        format!("{}", model.eta())
    }
}

pub fn beta_field(model: &ConnectionModel) -> String {
    num(model.beta())
}

pub fn csv_writer(path: &Path) -> Result<csv::Writer<BufWriter<File>>, CliError> {
    let file = File::create(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    Ok(csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(BufWriter::new(file)))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let file = File::create(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let mut w = BufWriter::new(file);
    serde_json::to_writer_pretty(&mut w, value)?;
    w.write_all(b"\n")?;
    w.flush()?;
    Ok(())
}

pub fn create_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))
}

pub fn sha256_file(path: &Path) -> Result<String, CliError> {
    let bytes = fs::read(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    Ok(hex::encode(Sha256::digest(bytes)))
}

#[derive(Debug, Serialize)]
pub struct CellTiming {
    pub index: usize,
    pub model: ConnectionModel,
    pub density: f64,
    pub n: usize,
    pub wall_seconds: f64,
}

#[derive(Debug, Serialize)]
pub struct OutputDigest {
    pub file: String,
    pub sha256: String,
}

/// Provenance record written next to the results of every command.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub version: String,
    pub config: serde_json::Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rng: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed_scheme: Option<String>,
    pub started: String,
    pub finished: String,
    pub cells: Vec<CellTiming>,
    pub outputs: Vec<OutputDigest>,
}

pub struct ManifestBuilder {
    command: String,
    config: serde_json::Value,
    started: DateTime<Utc>,
    pub rng: Option<String>,
    pub seed_scheme: Option<String>,
    pub cells: Vec<CellTiming>,
}

fn timestamp(t: DateTime<Utc>) -> String {
    t.to_rfc3339_opts(SecondsFormat::Millis, true)
}

impl ManifestBuilder {
    pub fn start<T: Serialize>(command: &str, config: &T) -> Result<Self, CliError> {
        Ok(ManifestBuilder {
            command: command.to_string(),
            config: serde_json::to_value(config)?,
            started: Utc::now(),
            rng: None,
            seed_scheme: None,
            cells: Vec::new(),
        })
    }

    pub fn timing(
        &mut self,
        index: usize,
        model: ConnectionModel,
        density: f64,
        n: usize,
        wall: Duration,
    ) {
        self.cells.push(CellTiming {
            index,
            model,
            density,
            n,
            wall_seconds: wall.as_secs_f64(),
        });
    }

    /// Hashes `outputs` (relative to `dir`) and writes `<command>-manifest.json`.
    pub fn finish(self, dir: &Path, outputs: &[&str]) -> Result<PathBuf, CliError> {
        let outputs = outputs
            .iter()
            .map(|f| {
                Ok(OutputDigest {
                    file: f.to_string(),
                    sha256: sha256_file(&dir.join(f))?,
                })
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        let manifest = RunManifest {
            command: self.command.clone(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            config: self.config,
            rng: self.rng,
            seed_scheme: self.seed_scheme,
            started: timestamp(self.started),
            finished: timestamp(Utc::now()),
            cells: self.cells,
            outputs,
        };
        let path = dir.join(format!("{}-manifest.json", self.command));
        write_json(&path, &manifest)?;
        Ok(path)
    }
}

/// Key shared by simulated and analytic rows.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GridKey {
    pub eta: String,
    pub beta: String,
    pub rho: String,
    pub k: u32,
}

impl std::fmt::Display for GridKey {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let beta = if self.beta.is_empty() {
            "-"
        } else {
            &self.beta
        };
        write!(
            f,
            "(eta={}, beta={}, rho={}, k={})",
            self.eta, beta, self.rho, self.k
        )
    }
}

/// Canonical text of a numeric field, so `2`, `2.0` and `2e0` join.
pub fn canonical(field: &str) -> String {
    let t = field.trim();
    if t.is_empty() || t.eq_ignore_ascii_case("inf") {
        return t.to_ascii_lowercase();
    }
    match t.parse::<f64>() {
        Ok(v) => format!("{v}"),
        Err(_) => t.to_string(),
    }
}
