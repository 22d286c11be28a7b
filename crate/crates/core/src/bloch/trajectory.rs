use num_complex::Complex64;
use serde::Serialize;

use super::density::{DensityMatrix, ZERO};
use super::equations::{FieldProfile, Liouvillian};
use super::hamiltonian::LocalHamiltonian;
use super::propagate::{pack, unpack, InvariantStats};
use super::steady::stationary_or_thermal;
use crate::error::Result;
use crate::model::{thermal_velocity, DriveParams, PrismGeometry, PumpGeometry, VaporParams};
use crate::numerics::{ArrivingBc, ChiWeighting, Numerics};
use crate::ode::{Dop853, StepStats, System};
use crate::thermal::quadrature::GAUSS_LEGENDRE_4;

/// Which boundary-value treatment a velocity class received.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Departing,
    Arriving,
    Stationary,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrajectoryDiagnostics {
    pub regime: Regime,
    pub final_trace_error: f64,
    pub invariants: InvariantStats,
    pub steps: StepStats,
}

/// Depth-integrated probe coherences of one velocity class, in metres.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrajectoryResult {
    pub integrated_rho14: Complex64,
    pub integrated_rho24: Complex64,
    pub diagnostics: TrajectoryDiagnostics,
}


/// Convective equation in time along z(t) = z0 + v·t. The last two slots carry
/// κ∫ρ₁₄w dz and κ∫ρ₂₄w dz.
struct Convective {
    lv: Liouvillian,
    profile: FieldProfile,
    z0: f64,
    v: f64,
    kappa: f64,
    weight_kappa: f64,
}

impl System<18> for Convective {
    fn rhs(&self, t: f64, y: &[Complex64; 18], dy: &mut [Complex64; 18]) {
        let z = self.z0 + self.v * t;
        let (pump, probe) = self.profile.at(z);
        let mut out = [[ZERO; 4]; 4];
        self.lv.with_couplings(pump, probe).apply_hermitian(&unpack(&y[..16]), &mut out);
        pack(&out, &mut dy[..16]);
        let w = self.kappa * self.v.abs() * (-self.weight_kappa * z).exp();
        dy[16] = y[3] * w;
        dy[17] = y[7] * w;
    }
}

/// Per-configuration constants shared by every velocity class of a sweep.
#[derive(Debug, Clone, Copy)]
pub struct TrajectorySolver {
    pub vapor: VaporParams,
    pub geom: PrismGeometry,
    pub numerics: Numerics,
    pub kappa: f64,
    pub v_thermal: f64,
}

impl TrajectorySolver {
    pub fn new(vapor: &VaporParams, geom: &PrismGeometry, numerics: &Numerics) -> Result<Self> {
        vapor.validate()?;
        numerics.validate()?;
        let kappa = crate::model::evanescent_kappa(geom)?;
        Ok(Self { vapor: *vapor, geom: *geom, numerics: *numerics, kappa, v_thermal: thermal_velocity(vapor) })
    }

    pub fn z_max(&self) -> f64 {
        self.numerics.z_max_over_delta / self.kappa
    }

    /// Doppler-shifted (probe, pump) detunings seen by the class (v_x, v_z).
    pub fn doppler_detunings(&self, vx: f64, vz: f64, drive: &DriveParams) -> (f64, f64) {
        let probe = drive.detuning_probe - self.geom.probe_k_parallel() * vx;
        let pump = match drive.pump_geometry {
            PumpGeometry::PerpendicularPlaneWave => drive.detuning_pump + self.geom.pump_k() * vz,
            PumpGeometry::CoPropagatingEvanescent => drive.detuning_pump - self.geom.pump_k_parallel() * vx,
        };
        (probe, pump)
    }

    pub fn solve(&self, vx: f64, vz: f64, drive: &DriveParams) -> Result<TrajectoryResult> {
        let (probe, pump) = self.doppler_detunings(vx, vz, drive);
        self.solve_detuned(probe, pump, vz, drive)
    }

    /// Trajectory with explicit local detunings; `drive` supplies the Rabi
    /// frequencies and the pump geometry only.
    pub fn solve_detuned(
        &self,
        probe_detuning: f64,
        pump_detuning: f64,
        vz: f64,
        drive: &DriveParams,
    ) -> Result<TrajectoryResult> {
        let profile = FieldProfile::new(drive, &self.geom)?;
        let h = LocalHamiltonian::new(self.vapor.hfs_splitting, pump_detuning, probe_detuning, 0.0, 0.0);
        let lv = Liouvillian::new(h, self.vapor.gamma3, self.vapor.gamma4);
        let threshold = self.numerics.small_vz_epsilon * self.v_thermal;
        let result = if vz.abs() <= threshold {
            self.stationary(&lv, &profile)
        } else if vz > 0.0 {
            self.convective(&lv, &profile, DensityMatrix::thermal_ground(), vz, Regime::Departing)
        } else {
            let start = match self.numerics.arriving_bc {
                ArrivingBc::Thermal => DensityMatrix::thermal_ground(),
                ArrivingBc::PumpedBulk => stationary_or_thermal(&lv.with_couplings(profile.bulk_pump(), 0.0))?,
            };
            self.convective(&lv, &profile, start, vz, Regime::Arriving)
        }?;
        Ok(result)
    }

    fn weight_kappa(&self) -> f64 {
        match self.numerics.chi_weighting {
            ChiWeighting::Plain => 0.0,
            ChiWeighting::Evanescent => self.kappa,
        }
    }

    fn convective(
        &self,
        lv: &Liouvillian,
        profile: &FieldProfile,
        start: DensityMatrix,
        vz: f64,
        regime: Regime,
    ) -> Result<TrajectoryResult> {
        let z_max = self.z_max();
        let z0 = if vz > 0.0 { 0.0 } else { z_max };
        let sys = Convective { lv: *lv, profile: *profile, z0, v: vz, kappa: self.kappa, weight_kappa: self.weight_kappa() };
        let mut y = [ZERO; 18];
        y[..16].copy_from_slice(&start.to_flat());
        let mut inv = InvariantStats::default();
        inv.check(0.0, &start)?;
        let duration = z_max / vz.abs();
        let stepper = Dop853::new(self.numerics.tolerances()).with_h_max(0.5 / (self.kappa * vz.abs()));
        let steps = stepper.integrate(&sys, 0.0, duration, &mut y, |t, y| {
            inv.check(t, &DensityMatrix::from_flat(&y[..16]))
        })?;
        let end = DensityMatrix::from_flat(&y[..16]);
        Ok(TrajectoryResult {
            integrated_rho14: y[16] / self.kappa,
            integrated_rho24: y[17] / self.kappa,
            diagnostics: TrajectoryDiagnostics {
                regime,
                final_trace_error: end.trace_error(),
                invariants: inv,
                steps,
            },
        })
    }

    fn stationary(&self, lv: &Liouvillian, profile: &FieldProfile) -> Result<TrajectoryResult> {
        let z_max = self.z_max();
        let panels = self.numerics.z_max_over_delta.ceil().max(1.0) as usize;
        let width = z_max / panels as f64;
        let wk = self.weight_kappa();
        let (mut i14, mut i24) = (ZERO, ZERO);
        let mut inv = InvariantStats::default();
        let mut last = DensityMatrix::thermal_ground();
        for p in 0..panels {
            let mid = (p as f64 + 0.5) * width;
            for &(x, w) in &GAUSS_LEGENDRE_4 {
                let z = mid + 0.5 * width * x;
                let (pump, probe) = profile.at(z);
                let rho = stationary_or_thermal(&lv.with_couplings(pump, probe))?;
                inv.check(z, &rho)?;
                let weight = 0.5 * width * w * (-wk * z).exp();
                i14 += rho.0[0][3] * weight;
                i24 += rho.0[1][3] * weight;
                last = rho;
            }
        }
        Ok(TrajectoryResult {
            integrated_rho14: i14,
            integrated_rho24: i24,
            diagnostics: TrajectoryDiagnostics {
                regime: Regime::Stationary,
                final_trace_error: last.trace_error(),
                invariants: inv,
                steps: StepStats::default(),
            },
        })
    }
}

/// Integrates one velocity class (v_x, v_z) through the evanescent region and
/// returns ∫ρ₁₄ dz and ∫ρ₂₄ dz (weighted per `numerics.chi_weighting`).
pub fn integrate_trajectory(
    vx: f64,
    vz: f64,
    drive: &DriveParams,
    vapor: &VaporParams,
    geom: &PrismGeometry,
    numerics: &Numerics,
) -> Result<TrajectoryResult> {
    drive.validate()?;
    TrajectorySolver::new(vapor, geom, numerics)?.solve(vx, vz, drive)
}
