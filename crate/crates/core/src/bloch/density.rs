use num_complex::Complex64;

pub type Matrix4 = [[Complex64; 4]; 4];

pub(crate) const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Level indices in the basis |1⟩, |2⟩ (ground hyperfine), |3⟩ (D1), |4⟩ (D2).
pub const G1: usize = 0;
pub const G2: usize = 1;
pub const E3: usize = 2;
pub const E4: usize = 3;

/// Atomic density matrix in the four-level basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix(pub Matrix4);

impl DensityMatrix {
    pub fn zeros() -> Self {
        Self([[ZERO; 4]; 4])
    }

    pub fn from_populations(p: [f64; 4]) -> Self {
        let mut m = Self::zeros();
        for (i, pi) in p.iter().enumerate() {
            m.0[i][i] = Complex64::new(*pi, 0.0);
        }
        m
    }

    /// diag(½, ½, 0, 0): the unpolarized ground state.
    pub fn thermal_ground() -> Self {
        Self::from_populations([0.5, 0.5, 0.0, 0.0])
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.0[i][j]
    }

    pub fn population(&self, i: usize) -> f64 {
        self.0[i][i].re
    }

    pub fn trace(&self) -> Complex64 {
        (0..4).map(|i| self.0[i][i]).sum()
    }

    pub fn trace_error(&self) -> f64 {
        (self.trace() - 1.0).norm()
    }

    /// max |ρ − ρ†| over all entries.
    pub fn hermiticity_error(&self) -> f64 {
        let mut e = 0.0f64;
        for i in 0..4 {
            for j in 0..4 {
                e = e.max((self.0[i][j] - self.0[j][i].conj()).norm());
            }
        }
        e
    }

    pub fn min_population(&self) -> f64 {
        (0..4).map(|i| self.0[i][i].re).fold(f64::INFINITY, f64::min)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut e = 0.0f64;
        for i in 0..4 {
            for j in 0..4 {
                e = e.max((self.0[i][j] - other.0[i][j]).norm());
            }
        }
        e
    }

    /// Checks the trace, Hermiticity and population bounds.
    pub fn is_physical(&self, trace_tol: f64, herm_tol: f64) -> bool {
        self.trace_error() <= trace_tol
            && self.hermiticity_error() <= herm_tol
            && (0..4).all(|i| {
                let p = self.0[i][i].re;
                (-1e-8..=1.0 + 1e-8).contains(&p)
            })
    }

    pub fn hermitian_part(&self) -> Self {
        let mut m = *self;
        for i in 0..4 {
            for j in 0..4 {
                m.0[i][j] = (self.0[i][j] + self.0[j][i].conj()) * 0.5;
            }
        }
        m
    }

    pub fn to_flat(self) -> [Complex64; 16] {
        let mut out = [ZERO; 16];
        for i in 0..4 {
            for j in 0..4 {
                out[4 * i + j] = self.0[i][j];
            }
        }
        out
    }

    pub fn from_flat(v: &[Complex64]) -> Self {
        let mut m = Self::zeros();
        for i in 0..4 {
            for j in 0..4 {
                m.0[i][j] = v[4 * i + j];
            }
        }
        m
    }
}

impl Default for DensityMatrix {
    fn default() -> Self {
        Self::thermal_ground()
    }
}
