use num_complex::Complex64;

use super::density::{Matrix4, E3, E4, G1, G2, ZERO};
use crate::model::DriveParams;

/// Rotating-frame Hamiltonian ℋ₀ + V in angular-frequency units (ħ = 1).
///
/// The couplings are real: Ω_pu on |2⟩↔|3⟩ and Ω_pr(z) on both |1⟩↔|4⟩ and
/// |2⟩↔|4⟩. The printed overall −ħ is absorbed into the sign convention, which
/// makes Im ρ₁₄ and Im ρ₂₄ positive for an absorbing transition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalHamiltonian {
    /// Diagonal of ℋ₀: (−Δ_HFS, 0, Δ_pu, Δ_pr).
    pub diag: [f64; 4],
    pub pump: f64,
    pub probe: f64,
}

impl LocalHamiltonian {
    pub fn new(hfs_splitting: f64, pump_detuning: f64, probe_detuning: f64, pump: f64, probe: f64) -> Self {
        Self { diag: [-hfs_splitting, 0.0, pump_detuning, probe_detuning], pump, probe }
    }

    pub fn matrix(&self) -> Matrix4 {
        let mut h = [[ZERO; 4]; 4];
        for i in 0..4 {
            h[i][i] = Complex64::new(self.diag[i], 0.0);
        }
        let v = interaction_matrix(self.pump, self.probe);
        for i in 0..4 {
            for j in 0..4 {
                h[i][j] += v[i][j];
            }
        }
        h
    }

    /// −i[H, ρ], exploiting the sparsity of the couplings.
    #[inline]
    pub(crate) fn neg_i_commutator(&self, rho: &Matrix4, out: &mut Matrix4) {
        let (u, p) = (self.pump, self.probe);
        for i in 0..4 {
            for j in 0..4 {
                let mut c = rho[i][j] * (self.diag[i] - self.diag[j]);
                // (Vρ)_ij
                c += match i {
                    G1 => rho[E4][j] * p,
                    G2 => rho[E3][j] * u + rho[E4][j] * p,
                    E3 => rho[G2][j] * u,
                    _ => (rho[G1][j] + rho[G2][j]) * p,
                };
                // (ρV)_ij
                c -= match j {
                    G1 => rho[i][E4] * p,
                    G2 => rho[i][E3] * u + rho[i][E4] * p,
                    E3 => rho[i][G2] * u,
                    _ => (rho[i][G1] + rho[i][G2]) * p,
                };
                out[i][j] = Complex64::new(c.im, -c.re);
            }
        }
    }
}

fn interaction_matrix(pump: f64, probe: f64) -> Matrix4 {
    let mut v = [[ZERO; 4]; 4];
    let p = Complex64::new(probe, 0.0);
    let u = Complex64::new(pump, 0.0);
    v[G1][E4] = p;
    v[E4][G1] = p;
    v[G2][E4] = p;
    v[E4][G2] = p;
    v[G2][E3] = u;
    v[E3][G2] = u;
    v
}

/// Interaction V/ħ at depth `z` for a plane-wave pump and an evanescent probe
/// Ω_pr(z) = Ω_pr(0)·exp(−κz).
pub fn build_interaction(drive: &DriveParams, kappa: f64, z: f64) -> Matrix4 {
    interaction_matrix(drive.rabi_pump, drive.rabi_probe_surface * (-kappa * z).exp())
}
