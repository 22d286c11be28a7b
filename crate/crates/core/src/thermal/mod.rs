//! Maxwellian averaging of trajectory coherences into the probe susceptibility.

pub mod grid;
pub mod quadrature;
pub mod susceptibility;

pub use grid::{build_velocity_grid, split_vz_rule, VelocityGrid, VelocityNode};
pub use susceptibility::{
    doppler_fwhm_estimate, susceptibility, AverageDiagnostics, ChiSpectrum, SusceptibilityPoint, ThermalAverager,
};
