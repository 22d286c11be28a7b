use nalgebra::DMatrix;
use num_complex::Complex64;

use super::density::{DensityMatrix, Matrix4, ZERO};
use super::hamiltonian::LocalHamiltonian;
use super::relaxation::Rates;
use crate::error::Result;
use crate::model::{evanescent_kappa, DriveParams, PrismGeometry, PumpGeometry, VaporParams};

/// Spatial profile of the two drives above the prism face.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldProfile {
    pub rabi_pump: f64,
    pub rabi_probe: f64,
    pub kappa_probe: f64,
    /// Zero for a plane-wave pump.
    pub kappa_pump: f64,
}

impl FieldProfile {
    pub fn new(drive: &DriveParams, geom: &PrismGeometry) -> Result<Self> {
        let kappa_probe = evanescent_kappa(geom)?;
        let kappa_pump = match drive.pump_geometry {
            PumpGeometry::PerpendicularPlaneWave => 0.0,
            PumpGeometry::CoPropagatingEvanescent => geom.pump_kappa()?,
        };
        Ok(Self { rabi_pump: drive.rabi_pump, rabi_probe: drive.rabi_probe_surface, kappa_probe, kappa_pump })
    }

    /// (Ω_pu(z), Ω_pr(z))
    #[inline]
    pub fn at(&self, z: f64) -> (f64, f64) {
        let pump = if self.kappa_pump > 0.0 { self.rabi_pump * (-self.kappa_pump * z).exp() } else { self.rabi_pump };
        (pump, self.rabi_probe * (-self.kappa_probe * z).exp())
    }

    /// Pump Rabi frequency far from the surface.
    pub fn bulk_pump(&self) -> f64 {
        if self.kappa_pump > 0.0 {
            0.0
        } else {
            self.rabi_pump
        }
    }
}

/// Generator of the master equation at one point: dρ/dt = −i[H, ρ] + ℒρ.
#[derive(Debug, Clone, Copy)]
pub struct Liouvillian {
    pub hamiltonian: LocalHamiltonian,
    rates: Rates,
}

impl Liouvillian {
    pub fn new(hamiltonian: LocalHamiltonian, gamma3: f64, gamma4: f64) -> Self {
        Self { hamiltonian, rates: Rates::new(gamma3, gamma4) }
    }

    #[inline]
    pub fn apply(&self, rho: &Matrix4, out: &mut Matrix4) {
        self.hamiltonian.neg_i_commutator(rho, out);
        self.rates.add_to(rho, out);
    }

    /// `apply` for a Hermitian `rho`, with the lower triangle of the result set
    /// to the exact conjugate of the upper one so that integrators keep ρ = ρ†.
    #[inline]
    pub(crate) fn apply_hermitian(&self, rho: &Matrix4, out: &mut Matrix4) {
        self.apply(rho, out);
        for i in 0..4 {
            out[i][i].im = 0.0;
            for j in i + 1..4 {
                out[j][i] = out[i][j].conj();
            }
        }
    }

    pub(crate) fn with_couplings(&self, pump: f64, probe: f64) -> Self {
        let mut l = *self;
        l.hamiltonian.pump = pump;
        l.hamiltonian.probe = probe;
        l
    }

    /// 16×16 matrix acting on row-major vec(ρ).
    pub fn superoperator(&self) -> DMatrix<Complex64> {
        let mut m = DMatrix::from_element(16, 16, ZERO);
        let mut out = [[ZERO; 4]; 4];
        for col in 0..16 {
            let mut basis = [[ZERO; 4]; 4];
            basis[col / 4][col % 4] = Complex64::new(1.0, 0.0);
            self.apply(&basis, &mut out);
            for row in 0..16 {
                m[(row, col)] = out[row / 4][row % 4];
            }
        }
        m
    }
}

/// dρ/dt at depth `z` using the detunings stored in `drive` as the local ℋ₀.
pub fn obe_rhs(
    rho: &DensityMatrix,
    z: f64,
    drive: &DriveParams,
    vapor: &VaporParams,
    geom: &PrismGeometry,
) -> Result<Matrix4> {
    let profile = FieldProfile::new(drive, geom)?;
    let (pump, probe) = profile.at(z);
    let h = LocalHamiltonian::new(vapor.hfs_splitting, drive.detuning_pump, drive.detuning_probe, pump, probe);
    let mut out = [[ZERO; 4]; 4];
    Liouvillian::new(h, vapor.gamma3, vapor.gamma4).apply(&rho.0, &mut out);
    Ok(out)
}
