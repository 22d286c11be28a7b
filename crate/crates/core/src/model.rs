//! Beam, vapor and prism parameters, plus the scalar kinematics derived from them.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::constants::{self, CODATA};
use crate::error::{Result, SimError};

/// Prism index, probe incidence angle and the two laser wavelengths.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrismGeometry {
    n1: f64,
    theta_i: f64,
    probe_wavelength: f64,
    pump_wavelength: f64,
}

impl PrismGeometry {
    /// `theta_i` in radians, wavelengths in metres.
    pub fn new(n1: f64, theta_i: f64, probe_wavelength: f64, pump_wavelength: f64) -> Result<Self> {
        if !(n1 > 1.0 && n1.is_finite()) {
            return Err(SimError::InvalidInput(format!("prism index n1 = {n1} must exceed 1")));
        }
        if !(theta_i > 0.0 && theta_i < FRAC_PI_2) {
            return Err(SimError::InvalidInput(format!(
                "incidence angle {theta_i} rad must lie in (0, pi/2)"
            )));
        }
        if !(probe_wavelength > 0.0 && pump_wavelength > 0.0) {
            return Err(SimError::InvalidInput("wavelengths must be positive".into()));
        }
        Ok(Self { n1, theta_i, probe_wavelength, pump_wavelength })
    }

    pub fn n1(&self) -> f64 {
        self.n1
    }

    pub fn theta_i(&self) -> f64 {
        self.theta_i
    }

    pub fn probe_wavelength(&self) -> f64 {
        self.probe_wavelength
    }

    pub fn pump_wavelength(&self) -> f64 {
        self.pump_wavelength
    }

    pub fn with_theta(&self, theta_i: f64) -> Result<Self> {
        Self::new(self.n1, theta_i, self.probe_wavelength, self.pump_wavelength)
    }

    /// Probe angular frequency ω_pr, rad/s.
    pub fn probe_omega(&self) -> f64 {
        2.0 * PI * CODATA.light_speed_c / self.probe_wavelength
    }

    /// Pump angular frequency ω_pu, rad/s.
    pub fn pump_omega(&self) -> f64 {
        2.0 * PI * CODATA.light_speed_c / self.pump_wavelength
    }

    /// Vacuum probe wavenumber, 1/m.
    pub fn probe_k(&self) -> f64 {
        2.0 * PI / self.probe_wavelength
    }

    /// Vacuum pump wavenumber, 1/m.
    pub fn pump_k(&self) -> f64 {
        2.0 * PI / self.pump_wavelength
    }

    /// In-plane wavevector of the evanescent probe, (ω/c)·n1·sinθ_i.
    pub fn probe_k_parallel(&self) -> f64 {
        self.probe_k() * self.n1 * self.theta_i.sin()
    }

    /// In-plane wavevector of a pump totally reflected at the same angle.
    pub fn pump_k_parallel(&self) -> f64 {
        self.pump_k() * self.n1 * self.theta_i.sin()
    }

    /// Decay constant of a totally reflected pump at the probe's incidence angle.
    pub fn pump_kappa(&self) -> Result<f64> {
        self.evanescent_check()?;
        Ok(self.pump_k() * self.radicand().max(0.0).sqrt())
    }

    fn radicand(&self) -> f64 {
        let s = self.n1 * self.theta_i.sin();
        s * s - 1.0
    }

    fn evanescent_check(&self) -> Result<()> {
        let crit = critical_angle(self);
        if self.theta_i < crit {
            return Err(SimError::SubcriticalAngle {
                theta_deg: self.theta_i.to_degrees(),
                critical_deg: crit.to_degrees(),
            });
        }
        Ok(())
    }
}

/// Critical angle for total internal reflection at the prism–vacuum face, asin(1/n1).
pub fn critical_angle(geom: &PrismGeometry) -> f64 {
    (1.0 / geom.n1).asin()
}

/// Probe decay constant κ_pr = (ω_pr/c)·√(n1² sin²θ_i − 1), in 1/m.
///
/// The penetration depth is `1/κ`. At exactly the critical angle κ = 0.
pub fn evanescent_kappa(geom: &PrismGeometry) -> Result<f64> {
    let crit = critical_angle(geom);
    // asin/sin round trips can leave the radicand a few ulps negative at θ_c
    if geom.theta_i < crit && crit - geom.theta_i > 4.0 * f64::EPSILON {
        return Err(SimError::SubcriticalAngle {
            theta_deg: geom.theta_i.to_degrees(),
            critical_deg: crit.to_degrees(),
        });
    }
    let omega_over_c = geom.probe_omega() / CODATA.light_speed_c;
    Ok(omega_over_c * geom.radicand().max(0.0).sqrt())
}

/// Atomic vapor and level-structure parameters. Rates in rad/s.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VaporParams {
    /// Kelvin.
    pub temperature: f64,
    /// Kilograms.
    pub atomic_mass: f64,
    /// Ground hyperfine splitting Δ_HFS.
    pub hfs_splitting: f64,
    /// D1 excited-state decay rate Γ₃.
    pub gamma3: f64,
    /// D2 excited-state decay rate Γ₄.
    pub gamma4: f64,
    /// Dimensionless susceptibility scale A.
    pub chi_amplitude: f64,
}

impl VaporParams {
    /// Every violated invariant as `(field, message)`.
    pub fn violations(&self) -> Vec<(&'static str, String)> {
        let mut out = Vec::new();
        if !(self.temperature > 0.0 && self.temperature.is_finite()) {
            out.push(("temperature", format!("must be > 0 K, got {}", self.temperature)));
        }
        if !(self.atomic_mass > 0.0 && self.atomic_mass.is_finite()) {
            out.push(("atomic_mass", format!("must be > 0 kg, got {}", self.atomic_mass)));
        }
        if !(self.hfs_splitting > 0.0) {
            out.push(("hfs_splitting", "must be > 0".to_string()));
        }
        if !(self.gamma3 > 0.0) {
            out.push(("gamma3", "must be > 0".to_string()));
        }
        if !(self.gamma4 > 0.0) {
            out.push(("gamma4", "must be > 0".to_string()));
        }
        if !(self.chi_amplitude >= 0.0 && self.chi_amplitude.is_finite()) {
            out.push(("chi_amplitude", "must be >= 0".to_string()));
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        match self.violations().first() {
            None => Ok(()),
            Some((field, msg)) => Err(SimError::InvalidInput(format!("vapor.{field}: {msg}"))),
        }
    }
}

impl Default for VaporParams {
    fn default() -> Self {
        Self {
            temperature: 350.65,
            atomic_mass: constants::RB85_MASS,
            hfs_splitting: constants::hz_to_rad(constants::RB85_HFS_HZ),
            gamma3: constants::hz_to_rad(constants::RB_D1_LINEWIDTH_HZ),
            gamma4: constants::hz_to_rad(constants::RB_D2_LINEWIDTH_HZ),
            chi_amplitude: crate::DEFAULT_CHI_AMPLITUDE,
        }
    }
}

/// Thermal speed v_T = √(k_B T / m), m/s.
pub fn thermal_velocity(vapor: &VaporParams) -> f64 {
    (CODATA.boltzmann_k * vapor.temperature / vapor.atomic_mass).sqrt()
}

/// How the pump reaches the atoms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PumpGeometry {
    /// Plane wave at normal incidence on the prism face (along z); Doppler shift from v_z.
    PerpendicularPlaneWave,
    /// Pump totally reflected alongside the probe; evanescent in z, Doppler shift from v_x.
    CoPropagatingEvanescent,
}

/// Laser drive: Rabi frequencies and detunings in rad/s.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DriveParams {
    /// Ω_pu on |2⟩↔|3⟩ (at the surface for an evanescent pump).
    pub rabi_pump: f64,
    /// Ω_pr on |1⟩↔|4⟩ and |2⟩↔|4⟩ at z = 0.
    pub rabi_probe_surface: f64,
    /// Δ_pu⁰, lab-frame pump detuning.
    pub detuning_pump: f64,
    /// Δ_pr⁰, lab-frame probe detuning referenced to |2⟩→|4⟩.
    pub detuning_probe: f64,
    pub pump_geometry: PumpGeometry,
}

impl DriveParams {
    pub fn violations(&self) -> Vec<(&'static str, String)> {
        let mut out = Vec::new();
        if !(self.rabi_pump >= 0.0 && self.rabi_pump.is_finite()) {
            out.push(("rabi_pump", format!("must be >= 0, got {}", self.rabi_pump)));
        }
        if !(self.rabi_probe_surface >= 0.0 && self.rabi_probe_surface.is_finite()) {
            out.push(("rabi_probe", format!("must be >= 0, got {}", self.rabi_probe_surface)));
        }
        if !self.detuning_pump.is_finite() {
            out.push(("detuning_pump", "must be finite".to_string()));
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        match self.violations().first() {
            None => Ok(()),
            Some((field, msg)) => Err(SimError::InvalidInput(format!("drive.{field}: {msg}"))),
        }
    }

    pub fn pump_off(&self) -> Self {
        Self { rabi_pump: 0.0, ..*self }
    }
}
