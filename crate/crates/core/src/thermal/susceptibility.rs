use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::grid::{split_vz_rule, VelocityGrid};
use super::quadrature::graded_rule;
use crate::bloch::{InvariantStats, TrajectoryResult, TrajectorySolver};
use crate::constants;
use crate::error::{Result, SimError};
use crate::model::{thermal_velocity, DriveParams, PrismGeometry, PumpGeometry, VaporParams};
use crate::numerics::{Numerics, Quadrature};
use crate::ode::StepStats;

/// Half-width of the v_x integration range in thermal velocities.
const VX_SPAN: f64 = 6.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SusceptibilityPoint {
    pub detuning_pump: f64,
    pub detuning_probe: f64,
    pub chi: Complex64,
}

/// Aggregated trajectory diagnostics, merged in a fixed order.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct AverageDiagnostics {
    pub trajectories: usize,
    pub steps: StepStats,
    pub invariants: InvariantStats,
    pub max_final_trace_error: f64,
}

impl AverageDiagnostics {
    fn add(&mut self, r: &TrajectoryResult) {
        self.trajectories += 1;
        self.steps += r.diagnostics.steps;
        self.invariants.merge(&r.diagnostics.invariants);
        self.max_final_trace_error = self.max_final_trace_error.max(r.diagnostics.final_trace_error);
    }

    pub fn merge(&mut self, other: &Self) {
        self.trajectories += other.trajectories;
        self.steps += other.steps;
        self.invariants.merge(&other.invariants);
        self.max_final_trace_error = self.max_final_trace_error.max(other.max_final_trace_error);
    }
}

/// χ over a list of probe detunings for one drive setting.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChiSpectrum {
    pub detunings: Vec<f64>,
    pub chi: Vec<Complex64>,
    pub diagnostics: AverageDiagnostics,
}

/// Gaussian FWHM of the probe Doppler kernel, √(8 ln 2)·k_pr,∥·v_T, in rad/s.
pub fn doppler_fwhm_estimate(vapor: &VaporParams, geom: &PrismGeometry) -> f64 {
    (8.0 * std::f64::consts::LN_2).sqrt() * geom.probe_k_parallel() * thermal_velocity(vapor)
}

fn at_detuning(detuning: f64, err: SimError) -> SimError {
    match err {
        SimError::AtDetuning { .. } => err,
        other => SimError::AtDetuning { detuning_hz: constants::rad_to_hz(detuning), source: Box::new(other) },
    }
}

/// χ at one detuning pair by a direct sum over a product velocity grid.
pub fn susceptibility(
    drive: &DriveParams,
    vapor: &VaporParams,
    geom: &PrismGeometry,
    grid: &VelocityGrid,
    numerics: &Numerics,
) -> Result<SusceptibilityPoint> {
    drive.validate()?;
    let solver = TrajectorySolver::new(vapor, geom, numerics)?;
    let (chi, _) = product_sum(&solver, drive, grid)?;
    Ok(SusceptibilityPoint { detuning_pump: drive.detuning_pump, detuning_probe: drive.detuning_probe, chi })
}

fn product_sum(solver: &TrajectorySolver, drive: &DriveParams, grid: &VelocityGrid) -> Result<(Complex64, AverageDiagnostics)> {
    let results: Vec<Result<TrajectoryResult>> =
        grid.nodes.par_iter().map(|n| solver.solve(n.vx, n.vz, drive)).collect();
    let mut diag = AverageDiagnostics::default();
    let mut sum = Complex64::new(0.0, 0.0);
    for (node, r) in grid.nodes.iter().zip(results) {
        let r = r?;
        diag.add(&r);
        sum += (r.integrated_rho14 + r.integrated_rho24) * node.weight;
    }
    Ok((sum * solver.kappa * solver.vapor.chi_amplitude, diag))
}

/// Union of `[d − half, d + half]` over all outputs, as disjoint sorted intervals.
fn kernel_support(detunings: &[f64], half: f64) -> Vec<(f64, f64)> {
    let mut sorted = detunings.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut spans: Vec<(f64, f64)> = Vec::new();
    for d in sorted {
        match spans.last_mut() {
            Some(last) if d - half <= last.1 => last.1 = d + half,
            _ => spans.push((d - half, d + half)),
        }
    }
    spans
}

/// Thermal averaging of trajectories into χ for whole spectra.
#[derive(Debug, Clone)]
pub struct ThermalAverager {
    pub solver: TrajectorySolver,
    vz_rule: Vec<(f64, f64)>,
    grid: Option<VelocityGrid>,
}

impl ThermalAverager {
    pub fn new(vapor: &VaporParams, geom: &PrismGeometry, numerics: &Numerics) -> Result<Self> {
        let solver = TrajectorySolver::new(vapor, geom, numerics)?;
        let vz_rule = split_vz_rule(vapor, numerics.order_z, numerics.small_vz_epsilon)?;
        let grid = match numerics.quadrature {
            Quadrature::Product => Some(super::grid::build_velocity_grid(vapor, numerics.order_x, numerics.order_z)?),
            Quadrature::Adaptive => None,
        };
        Ok(Self { solver, vz_rule, grid })
    }

    fn sigma(&self) -> f64 {
        self.solver.geom.probe_k_parallel() * self.solver.v_thermal
    }

    /// Linewidth of the probe resonance for atoms with normal velocity `vz`.
    fn resonance_width(&self, vz: f64) -> f64 {
        0.5 * self.solver.vapor.gamma4 + self.solver.kappa * vz.abs()
    }

    fn panel_ratio(&self) -> f64 {
        25.6 / self.solver.numerics.order_x as f64
    }

    fn panel_cap(&self) -> f64 {
        32.0 / self.solver.numerics.order_x as f64
    }

    /// χ(Δ_pr⁰) for every entry of `detunings`; `drive.detuning_probe` is ignored.
    pub fn chi_spectrum(&self, drive: &DriveParams, detunings: &[f64]) -> Result<ChiSpectrum> {
        drive.validate()?;
        if detunings.iter().any(|d| !d.is_finite()) {
            return Err(SimError::InvalidInput("probe detunings must be finite".into()));
        }
        let (chi, diagnostics) = match (&self.grid, drive.pump_geometry) {
            (Some(grid), _) => self.by_product(grid, drive, detunings)?,
            (None, PumpGeometry::CoPropagatingEvanescent) if drive.rabi_pump > 0.0 => self.by_velocity(drive, detunings)?,
            (None, _) => self.by_convolution(drive, detunings)?,
        };
        Ok(ChiSpectrum { detunings: detunings.to_vec(), chi, diagnostics })
    }

    fn by_product(&self, grid: &VelocityGrid, drive: &DriveParams, detunings: &[f64]) -> Result<(Vec<Complex64>, AverageDiagnostics)> {
        let mut chi = Vec::with_capacity(detunings.len());
        let mut diag = AverageDiagnostics::default();
        for &d in detunings {
            let local = DriveParams { detuning_probe: d, ..*drive };
            let (c, dg) = product_sum(&self.solver, &local, grid).map_err(|e| at_detuning(d, e))?;
            chi.push(c);
            diag.merge(&dg);
        }
        Ok((chi, diag))
    }

    /// Probe resonances of a class with pump detuning `pump`: both bare lines
    /// and the pump-dressed |2⟩ levels.
    fn resonances(&self, drive: &DriveParams, pump: f64) -> Vec<f64> {
        let mut f = vec![-self.solver.vapor.hfs_splitting, 0.0];
        if drive.rabi_pump > 0.0 {
            let root = (pump * pump + 4.0 * drive.rabi_pump * drive.rabi_pump).sqrt();
            f.push(0.5 * (pump - root));
            f.push(0.5 * (pump + root));
        }
        f
    }

    /// Valid whenever the class response depends on v_x only through the probe
    /// Doppler shift: then χ is a Gaussian convolution in detuning.
    fn by_convolution(&self, drive: &DriveParams, detunings: &[f64]) -> Result<(Vec<Complex64>, AverageDiagnostics)> {
        let sigma = self.sigma();
        let spans = kernel_support(detunings, VX_SPAN * sigma);
        let mut jobs = Vec::new();
        for (iz, &(vz, _)) in self.vz_rule.iter().enumerate() {
            let (_, pump) = self.solver.doppler_detunings(0.0, vz, drive);
            let features = self.resonances(drive, pump);
            for &(lo, hi) in &spans {
                let rule = graded_rule(lo, hi, &features, self.resonance_width(vz), self.panel_ratio(), self.panel_cap() * sigma);
                jobs.extend(rule.into_iter().map(|(delta, w)| (iz, delta, w, pump)));
            }
        }
        let results: Vec<Result<TrajectoryResult>> = jobs
            .par_iter()
            .map(|&(iz, delta, _, pump)| {
                self.solver.solve_detuned(delta, pump, self.vz_rule[iz].0, drive).map_err(|e| at_detuning(delta, e))
            })
            .collect();

        let mut diag = AverageDiagnostics::default();
        let mut samples = Vec::with_capacity(jobs.len());
        for (job, r) in jobs.iter().zip(results) {
            let r = r?;
            diag.add(&r);
            let f = (r.integrated_rho14 + r.integrated_rho24) * (job.2 * self.vz_rule[job.0].1);
            samples.push((job.1, f));
        }
        let norm = self.solver.kappa * self.solver.vapor.chi_amplitude / ((2.0 * std::f64::consts::PI).sqrt() * sigma);
        let chi = detunings
            .iter()
            .map(|&d| {
                let mut acc = Complex64::new(0.0, 0.0);
                for &(delta, f) in &samples {
                    let u = (d - delta) / sigma;
                    acc += f * (-0.5 * u * u).exp();
                }
                acc * norm
            })
            .collect();
        Ok((chi, diag))
    }

    /// Direct v_x integration per output detuning, for pumps whose Doppler
    /// shift is keyed to v_x.
    fn by_velocity(&self, drive: &DriveParams, detunings: &[f64]) -> Result<(Vec<Complex64>, AverageDiagnostics)> {
        let vt = self.solver.v_thermal;
        let k = self.solver.geom.probe_k_parallel();
        let k_pu = self.solver.geom.pump_k_parallel();
        let mut jobs = Vec::new();
        for (i, &d) in detunings.iter().enumerate() {
            let features: Vec<f64> = [d / k, (d + self.solver.vapor.hfs_splitting) / k, drive.detuning_pump / k_pu].to_vec();
            for (iz, &(vz, _)) in self.vz_rule.iter().enumerate() {
                let rule = graded_rule(-VX_SPAN * vt, VX_SPAN * vt, &features, self.resonance_width(vz) / k, self.panel_ratio(), self.panel_cap() * vt);
                jobs.extend(rule.into_iter().map(|(vx, w)| (i, iz, vx, w)));
            }
        }
        let results: Vec<Result<TrajectoryResult>> = jobs
            .par_iter()
            .map(|&(i, iz, vx, _)| {
                let local = DriveParams { detuning_probe: detunings[i], ..*drive };
                self.solver.solve(vx, self.vz_rule[iz].0, &local).map_err(|e| at_detuning(detunings[i], e))
            })
            .collect();

        let mut diag = AverageDiagnostics::default();
        let mut chi = vec![Complex64::new(0.0, 0.0); detunings.len()];
        let norm = self.solver.kappa * self.solver.vapor.chi_amplitude / ((2.0 * std::f64::consts::PI).sqrt() * vt);
        for (job, r) in jobs.iter().zip(results) {
            let r = r?;
            diag.add(&r);
            let u = job.2 / vt;
            let w = job.3 * self.vz_rule[job.1].1 * (-0.5 * u * u).exp();
            chi[job.0] += (r.integrated_rho14 + r.integrated_rho24) * (w * norm);
        }
        Ok((chi, diag))
    }
}
