use num_complex::Complex64;
use serde::Serialize;

use super::density::{DensityMatrix, Matrix4, ZERO};
use super::equations::{FieldProfile, Liouvillian};
use super::hamiltonian::LocalHamiltonian;
use crate::error::{Result, SimError};
use crate::model::{DriveParams, PrismGeometry, VaporParams};
use crate::ode::{Dop853, StepStats, System, Tolerances};

pub const TRACE_TOLERANCE: f64 = 1e-8;
pub const HERMITICITY_TOLERANCE: f64 = 1e-10;
pub const POPULATION_TOLERANCE: f64 = 1e-8;

/// Worst departures from a physical density matrix seen along a run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InvariantStats {
    pub max_trace_error: f64,
    pub max_hermiticity_error: f64,
    pub min_population: f64,
}

impl Default for InvariantStats {
    fn default() -> Self {
        Self { max_trace_error: 0.0, max_hermiticity_error: 0.0, min_population: f64::INFINITY }
    }
}

impl InvariantStats {
    pub fn record(&mut self, rho: &DensityMatrix) {
        self.max_trace_error = self.max_trace_error.max(rho.trace_error());
        self.max_hermiticity_error = self.max_hermiticity_error.max(rho.hermiticity_error());
        self.min_population = self.min_population.min(rho.min_population());
    }

    /// Records `rho` and fails if it breaks any tolerance.
    pub fn check(&mut self, t: f64, rho: &DensityMatrix) -> Result<()> {
        self.record(rho);
        let max_pop = (0..4).map(|i| rho.population(i)).fold(f64::MIN, f64::max);
        if rho.trace_error() > TRACE_TOLERANCE
            || rho.hermiticity_error() > HERMITICITY_TOLERANCE
            || rho.min_population() < -POPULATION_TOLERANCE
            || max_pop > 1.0 + POPULATION_TOLERANCE
        {
            return Err(SimError::InvariantViolation(format!(
                "at t = {t:e} s: trace error {:e}, hermiticity error {:e}, populations in [{:e}, {:e}]",
                rho.trace_error(),
                rho.hermiticity_error(),
                rho.min_population(),
                max_pop
            )));
        }
        Ok(())
    }

    pub fn merge(&mut self, other: &Self) {
        self.max_trace_error = self.max_trace_error.max(other.max_trace_error);
        self.max_hermiticity_error = self.max_hermiticity_error.max(other.max_hermiticity_error);
        self.min_population = self.min_population.min(other.min_population);
    }
}

#[inline]
pub(crate) fn unpack(y: &[Complex64]) -> Matrix4 {
    let mut m = [[ZERO; 4]; 4];
    for (r, row) in m.iter_mut().enumerate() {
        row.copy_from_slice(&y[4 * r..4 * r + 4]);
    }
    m
}

#[inline]
pub(crate) fn pack(m: &Matrix4, y: &mut [Complex64]) {
    for (r, row) in m.iter().enumerate() {
        y[4 * r..4 * r + 4].copy_from_slice(row);
    }
}

struct FixedPoint(Liouvillian);

impl System<16> for FixedPoint {
    fn rhs(&self, _t: f64, y: &[Complex64; 16], dy: &mut [Complex64; 16]) {
        let mut out = [[ZERO; 4]; 4];
        self.0.apply_hermitian(&unpack(y), &mut out);
        pack(&out, dy);
    }
}

/// Integrates the master equation at fixed depth for `duration` seconds.
pub fn propagate_time(
    rho0: &DensityMatrix,
    duration: f64,
    z: f64,
    drive: &DriveParams,
    vapor: &VaporParams,
    geom: &PrismGeometry,
) -> Result<DensityMatrix> {
    propagate_time_with(rho0, duration, z, drive, vapor, geom, Tolerances::default()).map(|(rho, _, _)| rho)
}

/// [`propagate_time`] with explicit tolerances, also returning step and invariant statistics.
pub fn propagate_time_with(
    rho0: &DensityMatrix,
    duration: f64,
    z: f64,
    drive: &DriveParams,
    vapor: &VaporParams,
    geom: &PrismGeometry,
    tol: Tolerances,
) -> Result<(DensityMatrix, StepStats, InvariantStats)> {
    if !(duration >= 0.0) {
        return Err(SimError::InvalidInput(format!("duration {duration} must be >= 0")));
    }
    let (pump, probe) = FieldProfile::new(drive, geom)?.at(z);
    let h = LocalHamiltonian::new(vapor.hfs_splitting, drive.detuning_pump, drive.detuning_probe, pump, probe);
    let sys = FixedPoint(Liouvillian::new(h, vapor.gamma3, vapor.gamma4));
    let mut y = rho0.to_flat();
    let mut inv = InvariantStats::default();
    inv.record(rho0);
    let stats = Dop853::new(tol).integrate(&sys, 0.0, duration, &mut y, |t, y| {
        inv.check(t, &DensityMatrix::from_flat(y))
    })?;
    Ok((DensityMatrix::from_flat(&y), stats, inv))
}
