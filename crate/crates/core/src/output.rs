//! Spectrum CSV, run manifest and atomic file writes.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::config::ConfigFile;
use crate::constants::rad_to_hz;
use crate::numerics::Quadrature;
use crate::scan::{PumpSelection, Spectrum};
use crate::thermal::AverageDiagnostics;

pub const CSV_COLUMNS: [&str; 7] =
    ["detuning_hz", "r_pump_off", "r_pump_on", "im_chi_off", "im_chi_on", "re_chi_off", "re_chi_on"];

/// Renders a spectrum; columns of a half that was not computed are left empty.
pub fn spectrum_csv(spectrum: &Spectrum, selection: PumpSelection) -> String {
    let mut out = CSV_COLUMNS.join(",");
    out.push('\n');
    let cell = |keep: bool, v: f64| if keep { format!("{v:e}") } else { String::new() };
    let (off, on) = (selection.off(), selection.on());
    for r in &spectrum.records {
        let _ = writeln!(
            out,
            "{:e},{},{},{},{},{},{}",
            rad_to_hz(r.detuning_probe),
            cell(off, r.r_pump_off),
            cell(on, r.r_pump_on),
            cell(off, r.chi_off.im),
            cell(on, r.chi_on.im),
            cell(off, r.chi_off.re),
            cell(on, r.chi_on.re),
        );
    }
    out
}

/// Writes through a sibling temporary file and renames it into place.
pub fn write_atomic(path: &Path, contents: &[u8]) -> std::io::Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp: PathBuf = dir.join(format!(".{name}.{}.tmp", std::process::id()));
    let result = (|| {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(contents)?;
        f.sync_all()?;
        std::fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = std::fs::remove_file(&tmp);
    }
    result
}

#[derive(Debug, Clone, Serialize)]
pub struct StageDiagnostics {
    pub name: String,
    pub quadrature: Quadrature,
    pub order_x: usize,
    pub order_z: usize,
    pub trajectories: usize,
    pub accepted_steps: usize,
    pub rejected_steps: usize,
    pub rhs_evaluations: usize,
    pub max_trace_error: f64,
    pub max_hermiticity_error: f64,
    pub min_population: f64,
    pub output: Option<String>,
}

impl StageDiagnostics {
    pub fn new(name: &str, config: &ConfigFile, d: &AverageDiagnostics, output: Option<String>) -> Self {
        let min_population = if d.trajectories == 0 { 0.0 } else { d.invariants.min_population };
        Self {
            name: name.to_string(),
            quadrature: config.numerics.quadrature,
            order_x: config.numerics.order_x,
            order_z: config.numerics.order_z,
            trajectories: d.trajectories,
            accepted_steps: d.steps.accepted,
            rejected_steps: d.steps.rejected,
            rhs_evaluations: d.steps.evaluations,
            max_trace_error: d.invariants.max_trace_error.max(d.max_final_trace_error),
            max_hermiticity_error: d.invariants.max_hermiticity_error,
            min_population,
            output,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum RunStatus {
    Ok,
    Failed,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub status: RunStatus,
    pub started_unix_s: f64,
    pub wall_clock_s: f64,
    pub threads: usize,
    pub pump: PumpSelection,
    pub power_series: bool,
    pub trace_tolerance: f64,
    pub config: ConfigFile,
    pub stages: Vec<StageDiagnostics>,
    pub failure: Option<String>,
}

impl RunManifest {
    /// Marks the run FAILED if any stage exceeded the trace tolerance.
    pub fn finalize(&mut self) {
        if let Some(s) = self.stages.iter().find(|s| !(s.max_trace_error <= self.trace_tolerance)) {
            self.status = RunStatus::Failed;
            self.failure.get_or_insert_with(|| {
                format!("stage {}: trace error {:.3e} exceeds {:.1e}", s.name, s.max_trace_error, self.trace_tolerance)
            });
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("manifest serializes");
        s.push('\n');
        s
    }
}
