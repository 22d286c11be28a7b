//! Run configuration file: TOML with unit-suffixed keys.
//!
//! Frequencies are cyclic (Hz) in the file and angular (rad/s) everywhere
//! else; a rate given as `gamma3_hz = 5.75e6` means Γ₃ = 2π × 5.75 MHz.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::constants::{self, hz_to_rad};
use crate::model::{evanescent_kappa, DriveParams, PrismGeometry, PumpGeometry, VaporParams};
use crate::numerics::Numerics;
use crate::scan::{ExperimentConfig, SweepParams};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PrismSection {
    pub n1: f64,
    pub theta_i_deg: f64,
    pub probe_wavelength_m: f64,
    pub pump_wavelength_m: f64,
}

impl Default for PrismSection {
    fn default() -> Self {
        Self {
            n1: 1.52,
            theta_i_deg: 43.0,
            probe_wavelength_m: constants::RB_D2_WAVELENGTH,
            pump_wavelength_m: constants::RB_D1_WAVELENGTH,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct VaporSection {
    pub temperature_k: f64,
    pub atomic_mass_kg: f64,
    pub hfs_splitting_hz: f64,
    pub gamma3_hz: f64,
    pub gamma4_hz: f64,
    pub chi_amplitude: f64,
}

impl Default for VaporSection {
    fn default() -> Self {
        let v = VaporParams::default();
        Self {
            temperature_k: v.temperature,
            atomic_mass_kg: v.atomic_mass,
            hfs_splitting_hz: constants::RB85_HFS_HZ,
            gamma3_hz: constants::RB_D1_LINEWIDTH_HZ,
            gamma4_hz: constants::RB_D2_LINEWIDTH_HZ,
            chi_amplitude: v.chi_amplitude,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DriveSection {
    pub rabi_pump_hz: f64,
    pub rabi_probe_hz: f64,
    pub detuning_pump_hz: f64,
    pub pump_geometry: PumpGeometry,
}

impl Default for DriveSection {
    fn default() -> Self {
        Self {
            rabi_pump_hz: 20.0 * constants::RB_D1_LINEWIDTH_HZ,
            rabi_probe_hz: 0.1 * constants::RB_D2_LINEWIDTH_HZ,
            detuning_pump_hz: 0.0,
            pump_geometry: PumpGeometry::PerpendicularPlaneWave,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepSection {
    pub detuning_min_hz: f64,
    pub detuning_max_hz: f64,
    pub points: usize,
    pub pump_power_series_hz: Vec<f64>,
}

impl Default for SweepSection {
    fn default() -> Self {
        let mid = -0.5 * constants::RB85_HFS_HZ;
        Self {
            detuning_min_hz: mid - 4e9,
            detuning_max_hz: mid + 4e9,
            points: 241,
            pump_power_series_hz: [20.0, 10.0, 5.0, 2.5, 1.25, 0.0]
                .iter()
                .map(|m| m * constants::RB_D1_LINEWIDTH_HZ)
                .collect(),
        }
    }
}

/// The file as written, with every omitted key filled by its default.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ConfigFile {
    pub prism: PrismSection,
    pub vapor: VaporSection,
    pub drive: DriveSection,
    pub numerics: Numerics,
    pub sweep: SweepSection,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub field: String,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ConfigError {
    Parse { line: usize, column: usize, message: String },
    Invalid(Vec<Violation>),
    Io(String),
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigError::Parse { line, column, message } => {
                write!(f, "ParseError at line {line}, column {column}: {message}")
            }
            ConfigError::Invalid(v) => {
                write!(f, "ConfigInvalid: {} violation(s)", v.len())?;
                for x in v {
                    write!(f, "\n  {x}")?;
                }
                Ok(())
            }
            ConfigError::Io(m) => write!(f, "cannot read config: {m}"),
        }
    }
}

impl std::error::Error for ConfigError {}

fn line_column(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        toml::from_str(text).map_err(|e| {
            let (line, column) = e.span().map_or((1, 1), |s| line_column(text, s.start));
            ConfigError::Parse { line, column, message: e.message().trim().to_string() }
        })
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config sections serialize")
    }

    fn prism_violations(&self, out: &mut Vec<Violation>) -> Option<PrismGeometry> {
        let p = &self.prism;
        let mut push = |field: &str, message: String| {
            out.push(Violation { field: format!("prism.{field}"), message });
        };
        let mut ok = true;
        if !(p.n1 > 1.0 && p.n1.is_finite()) {
            push("n1", format!("must exceed 1, got {}", p.n1));
            ok = false;
        }
        if !(p.theta_i_deg > 0.0 && p.theta_i_deg < 90.0) {
            push("theta_i_deg", format!("must lie in (0, 90), got {}", p.theta_i_deg));
            ok = false;
        }
        for (field, v) in [("probe_wavelength_m", p.probe_wavelength_m), ("pump_wavelength_m", p.pump_wavelength_m)] {
            if !(v > 0.0 && v.is_finite()) {
                push(field, format!("must be > 0, got {v}"));
                ok = false;
            }
        }
        if !ok {
            return None;
        }
        let geom = PrismGeometry::new(p.n1, p.theta_i_deg.to_radians(), p.probe_wavelength_m, p.pump_wavelength_m).ok()?;
        if let Err(e) = evanescent_kappa(&geom) {
            push("theta_i_deg", e.to_string());
            return None;
        }
        if self.drive.pump_geometry == PumpGeometry::CoPropagatingEvanescent {
            if let Err(e) = geom.pump_kappa() {
                push("theta_i_deg", format!("pump: {e}"));
                return None;
            }
        }
        Some(geom)
    }

    /// Every violated invariant, or the resolved configuration in rad/s.
    pub fn resolve(&self) -> Result<ExperimentConfig, ConfigError> {
        let mut out = Vec::new();
        let prism = self.prism_violations(&mut out);

        let v = &self.vapor;
        let vapor = VaporParams {
            temperature: v.temperature_k,
            atomic_mass: v.atomic_mass_kg,
            hfs_splitting: hz_to_rad(v.hfs_splitting_hz),
            gamma3: hz_to_rad(v.gamma3_hz),
            gamma4: hz_to_rad(v.gamma4_hz),
            chi_amplitude: v.chi_amplitude,
        };
        for (field, message) in vapor.violations() {
            let key = match field {
                "temperature" => "temperature_k",
                "atomic_mass" => "atomic_mass_kg",
                "hfs_splitting" => "hfs_splitting_hz",
                "gamma3" => "gamma3_hz",
                "gamma4" => "gamma4_hz",
                other => other,
            };
            out.push(Violation { field: format!("vapor.{key}"), message });
        }

        let d = &self.drive;
        let drive = DriveParams {
            rabi_pump: hz_to_rad(d.rabi_pump_hz),
            rabi_probe_surface: hz_to_rad(d.rabi_probe_hz),
            detuning_pump: hz_to_rad(d.detuning_pump_hz),
            detuning_probe: 0.0,
            pump_geometry: d.pump_geometry,
        };
        for (field, message) in drive.violations() {
            out.push(Violation { field: format!("drive.{field}_hz"), message });
        }

        for (field, message) in self.numerics.violations() {
            out.push(Violation { field: format!("numerics.{field}"), message });
        }

        let s = &self.sweep;
        let sweep = SweepParams {
            detuning_min: hz_to_rad(s.detuning_min_hz),
            detuning_max: hz_to_rad(s.detuning_max_hz),
            points: s.points,
            pump_power_series: s.pump_power_series_hz.iter().map(|&f| hz_to_rad(f)).collect(),
        };
        for (field, message) in sweep.violations() {
            let key = match field {
                "points" => "points".to_string(),
                other => format!("{other}_hz"),
            };
            out.push(Violation { field: format!("sweep.{key}"), message });
        }

        match prism {
            Some(prism) if out.is_empty() => Ok(ExperimentConfig { prism, vapor, drive, numerics: self.numerics, sweep }),
            _ => Err(ConfigError::Invalid(out)),
        }
    }
}

/// Parses and checks a config text, collecting all violations.
pub fn validate(text: &str) -> Result<ExperimentConfig, ConfigError> {
    ConfigFile::parse(text)?.resolve()
}
