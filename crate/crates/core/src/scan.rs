//! Sweeps over probe detuning, pump-power families and dip metrics.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SimError};
use crate::model::{DriveParams, PrismGeometry, PumpGeometry, VaporParams};
use crate::numerics::Numerics;
use crate::optics::reflectivity_from_chi;
use crate::thermal::{AverageDiagnostics, ChiSpectrum, ThermalAverager};

/// Probe-detuning grid, rad/s.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepParams {
    pub detuning_min: f64,
    pub detuning_max: f64,
    pub points: usize,
    /// Ω_pu values for power families, rad/s, sorted descending.
    pub pump_power_series: Vec<f64>,
}

impl SweepParams {
    pub fn violations(&self) -> Vec<(&'static str, String)> {
        let mut v = Vec::new();
        if self.points < 2 {
            v.push(("points", format!("must be >= 2, got {}", self.points)));
        }
        if !(self.detuning_min.is_finite() && self.detuning_max.is_finite() && self.detuning_max > self.detuning_min) {
            v.push(("detuning_max", "must be finite and exceed detuning_min".to_string()));
        }
        if self.pump_power_series.iter().any(|r| !(*r >= 0.0 && r.is_finite())) {
            v.push(("pump_power_series", "values must be finite and >= 0".to_string()));
        } else if self.pump_power_series.windows(2).any(|w| w[1] > w[0]) {
            v.push(("pump_power_series", "values must be sorted in descending order".to_string()));
        }
        v
    }

    /// Uniform grid from `detuning_min` to `detuning_max` inclusive.
    pub fn grid(&self) -> Result<Vec<f64>> {
        if let Some((field, msg)) = self.violations().into_iter().find(|(f, _)| *f != "pump_power_series") {
            return Err(SimError::InvalidInput(format!("sweep.{field}: {msg}")));
        }
        let n = self.points - 1;
        Ok((0..=n)
            .map(|i| {
                let s = i as f64 / n as f64;
                self.detuning_min * (1.0 - s) + self.detuning_max * s
            })
            .collect())
    }
}

/// Everything needed for one run.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub prism: PrismGeometry,
    pub vapor: VaporParams,
    pub drive: DriveParams,
    pub numerics: Numerics,
    pub sweep: SweepParams,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectrumRecord {
    pub detuning_probe: f64,
    pub r_pump_off: f64,
    pub r_pump_on: f64,
    pub chi_off: Complex64,
    pub chi_on: Complex64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Spectrum {
    pub records: Vec<SpectrumRecord>,
    pub diagnostics_off: AverageDiagnostics,
    pub diagnostics_on: AverageDiagnostics,
}

impl Spectrum {
    pub fn detunings(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.detuning_probe).collect()
    }

    pub fn r_off(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.r_pump_off).collect()
    }

    pub fn r_on(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.r_pump_on).collect()
    }

    /// Worst trajectory invariants over both halves of the sweep.
    pub fn diagnostics(&self) -> AverageDiagnostics {
        let mut d = self.diagnostics_off;
        d.merge(&self.diagnostics_on);
        d
    }
}

fn check_grid(detunings: &[f64]) -> Result<()> {
    if detunings.len() < 2 {
        return Err(SimError::InvalidInput("a sweep needs at least two detunings".into()));
    }
    if detunings.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(SimError::InvalidInput("probe detunings must be strictly increasing".into()));
    }
    Ok(())
}

fn reflectivities(geom: &PrismGeometry, spectrum: &ChiSpectrum) -> Result<Vec<f64>> {
    spectrum
        .chi
        .iter()
        .zip(&spectrum.detunings)
        .map(|(&chi, &d)| {
            let r = reflectivity_from_chi(geom, chi);
            if !(r.is_finite() && (-1e-12..=1.0 + 1e-9).contains(&r)) {
                return Err(SimError::AtDetuning {
                    detuning_hz: crate::constants::rad_to_hz(d),
                    source: Box::new(SimError::InvariantViolation(format!("reflectivity {r} outside [0, 1]"))),
                });
            }
            Ok(r)
        })
        .collect()
}

fn assemble(geom: &PrismGeometry, off: &ChiSpectrum, on: &ChiSpectrum) -> Result<Spectrum> {
    let r_off = reflectivities(geom, off)?;
    let r_on = reflectivities(geom, on)?;
    let records = (0..off.chi.len())
        .map(|i| SpectrumRecord {
            detuning_probe: off.detunings[i],
            r_pump_off: r_off[i],
            r_pump_on: r_on[i],
            chi_off: off.chi[i],
            chi_on: on.chi[i],
        })
        .collect();
    Ok(Spectrum { records, diagnostics_off: off.diagnostics, diagnostics_on: on.diagnostics })
}

/// Which halves of a sweep to compute.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PumpSelection {
    Off,
    On,
    Both,
}

impl PumpSelection {
    pub fn off(self) -> bool {
        self != PumpSelection::On
    }

    pub fn on(self) -> bool {
        self != PumpSelection::Off
    }
}

/// χ for one drive, checked against the doubled-order rule when the
/// configuration asks for it.
fn averaged(avg: &ThermalAverager, config: &ExperimentConfig, drive: &DriveParams, detunings: &[f64]) -> Result<ChiSpectrum> {
    let base = avg.chi_spectrum(drive, detunings)?;
    let Some(threshold) = config.numerics.convergence_threshold else {
        return Ok(base);
    };
    let doubled = Numerics {
        order_x: 2 * config.numerics.order_x,
        order_z: 2 * config.numerics.order_z,
        ..config.numerics
    };
    let fine = ThermalAverager::new(&config.vapor, &config.prism, &doubled)?.chi_spectrum(drive, detunings)?;
    let scale = fine.chi.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let diff = base.chi.iter().zip(&fine.chi).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    let change = if scale > 0.0 { diff / scale } else { 0.0 };
    if change > threshold {
        return Err(SimError::NonConvergedQuadrature { change, threshold });
    }
    Ok(base)
}

/// Pump-off and pump-on reflectivity at every probe detuning.
pub fn sweep_spectrum(config: &ExperimentConfig, detunings: &[f64]) -> Result<Spectrum> {
    sweep_selected(config, detunings, PumpSelection::Both)
}

/// Like [`sweep_spectrum`], computing only the selected halves. A skipped
/// half repeats the computed one and carries empty diagnostics.
pub fn sweep_selected(config: &ExperimentConfig, detunings: &[f64], selection: PumpSelection) -> Result<Spectrum> {
    check_grid(detunings)?;
    let avg = ThermalAverager::new(&config.vapor, &config.prism, &config.numerics)?;
    let off = selection.off().then(|| averaged(&avg, config, &config.drive.pump_off(), detunings)).transpose()?;
    let on = selection.on().then(|| averaged(&avg, config, &config.drive, detunings)).transpose()?;
    match (off, on) {
        (Some(off), Some(on)) => assemble(&config.prism, &off, &on),
        (Some(one), None) | (None, Some(one)) => {
            let mut s = assemble(&config.prism, &one, &one)?;
            if selection.off() {
                s.diagnostics_on = AverageDiagnostics::default();
            } else {
                s.diagnostics_off = AverageDiagnostics::default();
            }
            Ok(s)
        }
        (None, None) => unreachable!("a selection computes at least one half"),
    }
}

/// One spectrum per Ω_pu, sharing a single pump-off computation.
pub fn pump_power_series(config: &ExperimentConfig, rabi_pump_values: &[f64]) -> Result<Vec<(f64, Spectrum)>> {
    let sweep = SweepParams { pump_power_series: rabi_pump_values.to_vec(), ..config.sweep.clone() };
    if let Some((field, msg)) = sweep.violations().first() {
        return Err(SimError::InvalidInput(format!("sweep.{field}: {msg}")));
    }
    let detunings = config.sweep.grid()?;
    let avg = ThermalAverager::new(&config.vapor, &config.prism, &config.numerics)?;
    let off = averaged(&avg, config, &config.drive.pump_off(), &detunings)?;
    rabi_pump_values
        .iter()
        .map(|&rabi| {
            let drive = DriveParams { rabi_pump: rabi, ..config.drive };
            let on = averaged(&avg, config, &drive, &detunings)?;
            Ok((rabi, assemble(&config.prism, &off, &on)?))
        })
        .collect()
}

/// Sweep with the pump totally reflected alongside the probe, so that its
/// Doppler shift follows v_x.
pub fn copropagating_control(config: &ExperimentConfig) -> Result<Spectrum> {
    if config.drive.pump_geometry != PumpGeometry::CoPropagatingEvanescent {
        return Err(SimError::InvalidInput(
            "copropagating_control needs drive.pump_geometry = co_propagating_evanescent".into(),
        ));
    }
    sweep_spectrum(config, &config.sweep.grid()?)
}

/// Depth and width of one absorption line, pump off against pump on.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DipMetrics {
    pub line_center: f64,
    pub depth_off: f64,
    pub depth_on: f64,
    pub suppression_ratio: f64,
    pub fwhm_off: f64,
}

fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

/// Median over the outermost 10% of the sweep (half from each end) and
/// the median absolute deviation about it.
pub fn baseline(r: &[f64]) -> (f64, f64) {
    let k = ((r.len() as f64 * 0.05).ceil() as usize).max(1);
    let mut outer: Vec<f64> = r[..k].iter().chain(&r[r.len() - k..]).copied().collect();
    let level = median(&mut outer);
    let mut dev: Vec<f64> = outer.iter().map(|x| (x - level).abs()).collect();
    (level, median(&mut dev))
}

/// Linear-interpolation crossing of `level` walking outwards from `center`.
fn crossing(x: &[f64], y: &[f64], center: usize, level: f64, step: isize) -> Option<f64> {
    let mut i = center as isize;
    loop {
        let j = i + step;
        if j < 0 || j as usize >= y.len() {
            return None;
        }
        let (a, b) = (i as usize, j as usize);
        if y[b] >= level {
            let t = (level - y[a]) / (y[b] - y[a]);
            return Some(x[a] + t * (x[b] - x[a]));
        }
        i = j;
    }
}

/// Vertex of the parabola through the grid minimum and its neighbours.
fn refine_minimum(x: &[f64], y: &[f64], i: usize) -> f64 {
    if i == 0 || i + 1 == y.len() {
        return x[i];
    }
    let curvature = y[i - 1] - 2.0 * y[i] + y[i + 1];
    if !(curvature > 0.0) {
        return x[i];
    }
    let h = 0.5 * (x[i + 1] - x[i - 1]);
    x[i] + 0.5 * h * (y[i - 1] - y[i + 1]) / curvature
}

/// Metrics of the single pump-off minimum inside `window` (rad/s, inclusive).
pub fn dip_metrics(off: &[SpectrumRecord], on: &[SpectrumRecord], window: (f64, f64)) -> Result<DipMetrics> {
    if off.len() != on.len() || off.len() < 3 {
        return Err(SimError::InvalidInput("spectra must have equal length >= 3".into()));
    }
    let x: Vec<f64> = off.iter().map(|r| r.detuning_probe).collect();
    let r_off: Vec<f64> = off.iter().map(|r| r.r_pump_off).collect();
    let r_on: Vec<f64> = on.iter().map(|r| r.r_pump_on).collect();
    let inside: Vec<usize> = (0..x.len()).filter(|&i| x[i] >= window.0 && x[i] <= window.1).collect();
    if inside.is_empty() {
        return Err(SimError::InvalidInput("dip window contains no detunings".into()));
    }
    let argmin = |r: &[f64]| inside.iter().copied().min_by(|&a, &b| r[a].total_cmp(&r[b])).unwrap();
    let (base_off, noise) = baseline(&r_off);
    let (base_on, _) = baseline(&r_on);
    let c = argmin(&r_off);
    let depth_off = base_off - r_off[c];
    if !(depth_off > 10.0 * noise.max(1e-15)) {
        return Err(SimError::NoDipFound { depth: depth_off, noise });
    }
    let depth_on = (base_on - r_on[argmin(&r_on)]).max(0.0);
    let half = base_off - 0.5 * depth_off;
    let left = crossing(&x, &r_off, c, half, -1);
    let right = crossing(&x, &r_off, c, half, 1);
    let fwhm_off = match (left, right) {
        (Some(l), Some(r)) => r - l,
        _ => return Err(SimError::NoDipFound { depth: depth_off, noise }),
    };
    Ok(DipMetrics {
        line_center: refine_minimum(&x, &r_off, c),
        depth_off,
        depth_on,
        suppression_ratio: depth_on / depth_off,
        fwhm_off,
    })
}

/// Indices of local minima of `r` deeper than `min_depth` below the baseline.
pub fn find_dips(r: &[f64], min_depth: f64) -> Vec<usize> {
    let (base, _) = baseline(r);
    (1..r.len().saturating_sub(1))
        .filter(|&i| r[i] < r[i - 1] && r[i] <= r[i + 1] && base - r[i] > min_depth)
        .collect()
}

/// Probe-detuning windows of the line from |1⟩ (at −Δ_HFS) and the pumped line from |2⟩ (at 0).
pub fn line_windows(vapor: &VaporParams, detunings: &[f64]) -> ((f64, f64), (f64, f64)) {
    let split = -0.5 * vapor.hfs_splitting;
    let lo = detunings.first().copied().unwrap_or(f64::NEG_INFINITY);
    let hi = detunings.last().copied().unwrap_or(f64::INFINITY);
    ((lo, split), (split, hi))
}

/// The on − off reflectivity difference and the FWHM of its dominant peak.
pub fn difference_peak(spectrum: &Spectrum) -> Option<(f64, f64)> {
    let x = spectrum.detunings();
    let diff: Vec<f64> = spectrum.records.iter().map(|r| r.r_pump_on - r.r_pump_off).collect();
    let (peak, &height) = diff.iter().enumerate().max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))?;
    if height == 0.0 {
        return None;
    }
    let sign = height.signum();
    let y: Vec<f64> = diff.iter().map(|d| -sign * d).collect();
    let level = -0.5 * height.abs();
    let l = crossing(&x, &y, peak, level, -1)?;
    let r = crossing(&x, &y, peak, level, 1)?;
    Some((x[peak], r - l))
}
