use nalgebra::DVector;
use num_complex::Complex64;

use super::density::DensityMatrix;
use super::equations::{FieldProfile, Liouvillian};
use super::hamiltonian::LocalHamiltonian;
use crate::error::{Result, SimError};
use crate::model::{DriveParams, PrismGeometry, VaporParams};

/// Singular values below this fraction of the largest count towards the nullity.
const NULL_THRESHOLD: f64 = 1e-12;

/// Stationary ρ of `lv` with unit trace.
///
/// Returns `SingularSystem` when the Liouvillian has more than one stationary
/// direction, which happens for a ground manifold left undriven.
pub fn stationary_state(lv: &Liouvillian) -> Result<DensityMatrix> {
    let m = lv.superoperator();
    let sv = m.singular_values();
    let largest = sv.iter().cloned().fold(0.0, f64::max);
    let nullity = sv.iter().filter(|&&s| s <= NULL_THRESHOLD * largest).count();
    if nullity > 1 {
        return Err(SimError::SingularSystem { nullity });
    }
    let mut a = m;
    for col in 0..16 {
        a[(0, col)] = Complex64::new(0.0, 0.0);
    }
    for k in 0..4 {
        a[(0, 5 * k)] = Complex64::new(1.0, 0.0);
    }
    let mut b = DVector::from_element(16, Complex64::new(0.0, 0.0));
    b[0] = Complex64::new(1.0, 0.0);
    let x = a.lu().solve(&b).ok_or(SimError::SingularSystem { nullity: 1 })?;
    Ok(DensityMatrix::from_flat(x.as_slice()).hermitian_part())
}

/// Like [`stationary_state`], resolving a dark ground manifold to diag(½,½,0,0).
pub fn stationary_or_thermal(lv: &Liouvillian) -> Result<DensityMatrix> {
    match stationary_state(lv) {
        Err(SimError::SingularSystem { .. }) => Ok(DensityMatrix::thermal_ground()),
        other => other,
    }
}

/// Steady state of the master equation at fixed depth `z`, with the detunings
/// in `drive` taken as the local ℋ₀. An undriven ground manifold resolves to
/// the thermal state.
pub fn local_steady_state(
    z: f64,
    drive: &DriveParams,
    vapor: &VaporParams,
    geom: &PrismGeometry,
) -> Result<DensityMatrix> {
    let (pump, probe) = FieldProfile::new(drive, geom)?.at(z);
    let h = LocalHamiltonian::new(vapor.hfs_splitting, drive.detuning_pump, drive.detuning_probe, pump, probe);
    stationary_or_thermal(&Liouvillian::new(h, vapor.gamma3, vapor.gamma4))
}
