use super::density::{DensityMatrix, Matrix4, E3, E4, G1, G2, ZERO};
use crate::model::VaporParams;

/// Spontaneous-decay part of dρ/dt.
///
/// Each excited level returns half of its decay to each ground level, so
/// the operator is trace preserving. Coherences damp at half the sum of
/// the two level widths; ρ₁₂ is undamped.
pub fn lindblad_relaxation(rho: &DensityMatrix, vapor: &VaporParams) -> Matrix4 {
    let mut out = [[ZERO; 4]; 4];
    let rates = Rates::new(vapor.gamma3, vapor.gamma4);
    rates.apply(&rho.0, &mut out);
    out
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Rates {
    gamma3: f64,
    gamma4: f64,
    coherence: [[f64; 4]; 4],
}

impl Rates {
    pub(crate) fn new(gamma3: f64, gamma4: f64) -> Self {
        let level = [0.0, 0.0, gamma3, gamma4];
        let mut coherence = [[0.0; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                if i != j {
                    coherence[i][j] = 0.5 * (level[i] + level[j]);
                }
            }
        }
        Self { gamma3, gamma4, coherence }
    }

    /// out += ℒρ
    #[inline]
    pub(crate) fn add_to(&self, rho: &Matrix4, out: &mut Matrix4) {
        for i in 0..4 {
            for j in 0..4 {
                if i != j {
                    out[i][j] -= rho[i][j] * self.coherence[i][j];
                }
            }
        }
        let d3 = rho[E3][E3] * self.gamma3;
        let d4 = rho[E4][E4] * self.gamma4;
        let feed = (d3 + d4) * 0.5;
        out[G1][G1] += feed;
        out[G2][G2] += feed;
        out[E3][E3] -= d3;
        out[E4][E4] -= d4;
    }

    fn apply(&self, rho: &Matrix4, out: &mut Matrix4) {
        *out = [[ZERO; 4]; 4];
        self.add_to(rho, out);
    }
}
