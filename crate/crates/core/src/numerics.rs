//! Numerical controls shared by the trajectory, averaging and sweep layers.

use serde::{Deserialize, Serialize};

use crate::error::{Result, SimError};

/// Initial state of atoms flying towards the surface.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ArrivingBc {
    Thermal,
    PumpedBulk,
}

/// Weight applied to ρ₁₄, ρ₂₄ inside the depth integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChiWeighting {
    /// ∫ρ dz
    Plain,
    /// ∫ρ·e^(−κz) dz
    Evanescent,
}

/// How the Maxwellian average is carried out.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quadrature {
    /// Gauss–Hermite product grid in (v_x, v_z).
    Product,
    /// Half-range Gauss rule in v_z, adaptive detuning-space rule in v_x.
    Adaptive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Numerics {
    /// Gauss–Hermite order along v_x; in adaptive mode panel sizes of the
    /// detuning-space rule scale as 1/order_x.
    pub order_x: usize,
    /// Gauss–Hermite order along v_z, or twice the per-side half-range order.
    pub order_z: usize,
    /// Integration depth in units of the penetration depth 1/κ.
    pub z_max_over_delta: f64,
    pub ode_rel_tol: f64,
    pub ode_abs_tol: f64,
    /// |v_z| below this many v_T is treated as locally stationary.
    pub small_vz_epsilon: f64,
    pub arriving_bc: ArrivingBc,
    pub chi_weighting: ChiWeighting,
    pub quadrature: Quadrature,
    /// Fail with `NonConvergedQuadrature` when doubling both orders moves χ by more than this.
    pub convergence_threshold: Option<f64>,
}

impl Default for Numerics {
    fn default() -> Self {
        Self {
            order_x: 32,
            order_z: 32,
            z_max_over_delta: 10.0,
            ode_rel_tol: 1e-8,
            ode_abs_tol: 1e-10,
            small_vz_epsilon: 1e-2,
            arriving_bc: ArrivingBc::PumpedBulk,
            chi_weighting: ChiWeighting::Evanescent,
            quadrature: Quadrature::Adaptive,
            convergence_threshold: None,
        }
    }
}

impl Numerics {
    pub fn violations(&self) -> Vec<(&'static str, String)> {
        let mut v = Vec::new();
        for (name, order) in [("order_x", self.order_x), ("order_z", self.order_z)] {
            if order < 2 {
                v.push((name, format!("quadrature order {order} must be at least 2")));
            } else if order % 2 != 0 {
                v.push((name, format!("quadrature order {order} is odd; even orders keep a node off v_z = 0")));
            }
        }
        if !(self.z_max_over_delta.is_finite() && self.z_max_over_delta > 0.0) {
            v.push(("z_max_over_delta", format!("{} must be positive", self.z_max_over_delta)));
        }
        if !(self.ode_rel_tol > 0.0 && self.ode_rel_tol < 1.0) {
            v.push(("ode_rel_tol", format!("{} must lie in (0, 1)", self.ode_rel_tol)));
        }
        if !(self.ode_abs_tol > 0.0 && self.ode_abs_tol.is_finite()) {
            v.push(("ode_abs_tol", format!("{} must be positive", self.ode_abs_tol)));
        }
        if !(self.small_vz_epsilon >= 0.0 && self.small_vz_epsilon < 1.0) {
            v.push(("small_vz_epsilon", format!("{} must lie in [0, 1)", self.small_vz_epsilon)));
        }
        if let Some(t) = self.convergence_threshold {
            if !(t > 0.0) {
                v.push(("convergence_threshold", format!("{t} must be positive")));
            }
        }
        v
    }

    pub fn validate(&self) -> Result<()> {
        match self.violations().first() {
            None => Ok(()),
            Some((field, msg)) => Err(SimError::InvalidInput(format!("numerics.{field}: {msg}"))),
        }
    }

    pub fn tolerances(&self) -> crate::ode::Tolerances {
        crate::ode::Tolerances { rel: self.ode_rel_tol, abs: self.ode_abs_tol }
    }
}
