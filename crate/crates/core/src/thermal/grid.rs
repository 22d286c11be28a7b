use serde::Serialize;

use super::quadrature::{gauss_hermite, half_normal_mass_below, half_range_gauss, log_half_range_gauss};
use crate::error::{Result, SimError};
use crate::model::{thermal_velocity, VaporParams};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VelocityNode {
    pub vx: f64,
    pub vz: f64,
    pub weight: f64,
}

/// Product quadrature for the bi-Maxwellian
/// W(v_x, v_z) = exp(−(v_x² + v_z²)/2v_T²) / (2π v_T²).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VelocityGrid {
    pub nodes: Vec<VelocityNode>,
    pub order_x: usize,
    pub order_z: usize,
}

fn check_order(name: &str, order: usize) -> Result<()> {
    if order < 2 || order % 2 != 0 {
        return Err(SimError::InvalidInput(format!(
            "{name} = {order}: quadrature orders must be even and at least 2 so that no node sits at v = 0"
        )));
    }
    Ok(())
}

/// Gauss–Hermite product grid, nodes ordered with v_x outermost.
pub fn build_velocity_grid(vapor: &VaporParams, order_x: usize, order_z: usize) -> Result<VelocityGrid> {
    check_order("order_x", order_x)?;
    check_order("order_z", order_z)?;
    let vt = thermal_velocity(vapor);
    let gx = gauss_hermite(order_x);
    let gz = gauss_hermite(order_z);
    let mut nodes = Vec::with_capacity(order_x * order_z);
    for &(x, wx) in &gx {
        for &(z, wz) in &gz {
            nodes.push(VelocityNode { vx: vt * x, vz: vt * z, weight: wx * wz });
        }
    }
    Ok(VelocityGrid { nodes, order_x, order_z })
}

/// Smallest |v_z|/v_T resolved by the moving-class rule when no stationary
/// band is configured.
const MIN_MOVING_VZ: f64 = 1e-4;

/// |v_z|/v_T above which the moving-class nodes stop being log spaced.
const LOG_SHIFT: f64 = 0.1;

/// One-dimensional rule for the Maxwellian in v_z, `order_z/2` nodes per
/// side, ordered by v_z.
///
/// Each side is split at ε·v_T (ε = `small_vz_epsilon`). The band below holds
/// a single node at ε·v_T/2 carrying its whole weight; the locally stationary
/// response there does not depend on v_z. Above it the nodes are Gauss in
/// ln(v_z + 0.1 v_T), which resolves the pumping structure of slow atoms, whose depth
/// scale κ⁻¹/τ_pump is about 2% of v_T. Splitting at v_z = 0 also integrates
/// exactly across the jump between arriving and departing atoms.
pub fn split_vz_rule(vapor: &VaporParams, order_z: usize, epsilon: f64) -> Result<Vec<(f64, f64)>> {
    check_order("order_z", order_z)?;
    if !(0.0..1.0).contains(&epsilon) {
        return Err(SimError::InvalidInput(format!("small_vz_epsilon = {epsilon} must lie in [0, 1)")));
    }
    let vt = thermal_velocity(vapor);
    let per_side = order_z / 2;
    let half: Vec<(f64, f64)> = if per_side == 1 {
        half_range_gauss(1)
    } else {
        let lo = if epsilon > 0.0 { epsilon } else { MIN_MOVING_VZ };
        let mut h = vec![(0.5 * lo, half_normal_mass_below(lo))];
        h.extend(log_half_range_gauss(per_side - 1, lo, LOG_SHIFT));
        h
    };
    let mut rule: Vec<(f64, f64)> = half.iter().rev().map(|&(s, w)| (-vt * s, 0.5 * w)).collect();
    rule.extend(half.iter().map(|&(s, w)| (vt * s, 0.5 * w)));
    Ok(rule)
}
