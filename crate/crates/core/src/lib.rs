//! Evanescent-wave selective-reflection spectra of a four-level alkali vapor
//! under hyperfine optical pumping.

pub mod bloch;
pub mod config;
pub mod constants;
pub mod error;
pub mod model;
pub mod numerics;
pub mod ode;
pub mod optics;
pub mod output;
pub mod scan;
pub mod thermal;

pub use error::{Result, SimError};

/// Susceptibility scale A. With the default configuration the deepest
/// pump-off dip reaches 1 − R_p ≈ 0.25.
pub const DEFAULT_CHI_AMPLITUDE: f64 = 32.74;
