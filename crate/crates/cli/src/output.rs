//! Artifact files: CSV tables and the `summary.json` record.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use orbitfix_core::format::{csv_text, g17};
use orbitfix_core::numlin::SpectrumReport;
use orbitfix_core::solvers::{SolveOutcome, Status};
use orbitfix_core::symmetry::OrbitReport;
use serde::Serialize;
use serde_json::Value;

use crate::{CliError, CliResult};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumSummary {
    pub count: usize,
    pub count_near_unit: usize,
    pub count_near_zero: usize,
    pub dominant_modulus: f64,
}

impl From<&SpectrumReport> for SpectrumSummary {
    fn from(r: &SpectrumReport) -> Self {
        Self {
            count: r.len(),
            count_near_unit: r.count_near_unit,
            count_near_zero: r.count_near_zero,
            dominant_modulus: r.dominant_modulus,
        }
    }
}

/// Contents of `summary.json`.
#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub schema_version: u32,
    pub problem: &'static str,
    pub subcommand: &'static str,
    /// Worst outcome over the solves of the run; absent when nothing was solved.
    pub status: Option<Status>,
    pub final_residual: Option<f64>,
    pub iterations: Option<usize>,
    pub orbit: Option<OrbitReport>,
    pub wall_time_s: f64,
    pub config: Value,
    pub spectrum: Option<SpectrumSummary>,
    pub rows: Vec<Value>,
    pub extra: Value,
    pub diagnostics: Vec<String>,
}

impl Summary {
    pub fn new(problem: &'static str, subcommand: &'static str, config: Value) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            problem,
            subcommand,
            status: None,
            final_residual: None,
            iterations: None,
            orbit: None,
            wall_time_s: 0.0,
            config,
            spectrum: None,
            rows: Vec::new(),
            extra: Value::Null,
            diagnostics: Vec::new(),
        }
    }

    pub fn record(&mut self, out: &SolveOutcome) {
        self.status = Some(out.status);
        self.final_residual = Some(out.final_residual());
        self.iterations = Some(out.iterations());
        self.diagnostics.extend(out.diagnostics.iter().cloned());
    }
}

pub struct OutDir(PathBuf);

impl OutDir {
    pub fn create(path: &Path) -> CliResult<Self> {
        fs::create_dir_all(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
        Ok(Self(path.to_path_buf()))
    }

    pub fn write(&self, name: &str, text: &str) -> CliResult<()> {
        let path = self.0.join(name);
        fs::write(&path, text).map_err(|source| CliError::Io { path: path.display().to_string(), source })
    }

    pub fn summary(&self, mut summary: Summary, start: Instant) -> CliResult<()> {
        summary.wall_time_s = start.elapsed().as_secs_f64();
        let mut text = serde_json::to_string_pretty(&summary)?;
        text.push('\n');
        self.write("summary.json", &text)
    }
}

pub fn spectrum_csv(r: &SpectrumReport) -> String {
    csv_text(
        &["index", "re", "im"],
        r.eigenvalues.iter().enumerate().map(|(i, z)| vec![i.to_string(), g17(z.re), g17(z.im)]),
    )
}
