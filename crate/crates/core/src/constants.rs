//! Fixed physical constants (CODATA 2018 exact values) and rubidium defaults.

use std::f64::consts::PI;

/// Constants used by the model. Not configurable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    /// Boltzmann constant, J/K.
    pub boltzmann_k: f64,
    /// Speed of light in vacuum, m/s.
    pub light_speed_c: f64,
    /// Reduced Planck constant, J s.
    pub hbar: f64,
}

pub const CODATA: PhysicalConstants = PhysicalConstants {
    boltzmann_k: 1.380_649e-23,
    light_speed_c: 299_792_458.0,
    hbar: 1.054_571_817e-34,
};

/// Atomic mass unit, kg.
pub const ATOMIC_MASS_UNIT: f64 = 1.660_539_066_60e-27;

/// Mass of a 85Rb atom, kg.
pub const RB85_MASS: f64 = 84.911_789_738 * ATOMIC_MASS_UNIT;

/// 85Rb ground-state hyperfine splitting, Hz.
pub const RB85_HFS_HZ: f64 = 3.035e9;

/// Natural linewidths of the Rb D1 and D2 excited states, Hz.
pub const RB_D1_LINEWIDTH_HZ: f64 = 5.75e6;
pub const RB_D2_LINEWIDTH_HZ: f64 = 6.07e6;

/// Vacuum wavelengths of the Rb D2 (probe) and D1 (pump) lines, m.
pub const RB_D2_WAVELENGTH: f64 = 780.241e-9;
pub const RB_D1_WAVELENGTH: f64 = 794.979e-9;

/// Converts a cyclic frequency in Hz to angular frequency in rad/s.
#[inline]
pub fn hz_to_rad(f: f64) -> f64 {
    2.0 * PI * f
}

/// Converts an angular frequency in rad/s to Hz.
#[inline]
pub fn rad_to_hz(w: f64) -> f64 {
    w / (2.0 * PI)
}
