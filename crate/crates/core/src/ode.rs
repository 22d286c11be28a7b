//! Adaptive explicit Runge–Kutta integration of complex-valued systems.
//!
//! An embedded 8(5,3) Dormand–Prince pair with the Hairer error norm and step
//! controller. The state is a fixed-size array of complex numbers so the Bloch
//! integrator runs without heap traffic.

use num_complex::Complex64;

use crate::error::{Result, SimError};

/// A first-order system `dy/dt = f(t, y)`.
pub trait System<const N: usize> {
    fn rhs(&self, t: f64, y: &[Complex64; N], dy: &mut [Complex64; N]);
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub rel: f64,
    pub abs: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { rel: 1e-8, abs: 1e-10 }
    }
}

/// Counters reported by an integration.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, serde::Serialize)]
pub struct StepStats {
    pub accepted: usize,
    pub rejected: usize,
    pub evaluations: usize,
}

impl std::ops::AddAssign for StepStats {
    fn add_assign(&mut self, rhs: Self) {
        self.accepted += rhs.accepted;
        self.rejected += rhs.rejected;
        self.evaluations += rhs.evaluations;
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Dop853 {
    pub tol: Tolerances,
    /// Upper bound on the step size; `f64::INFINITY` for none.
    pub h_max: f64,
    pub max_steps: usize,
    safe: f64,
    fac_min: f64,
    fac_max: f64,
}

impl Dop853 {
    pub fn new(tol: Tolerances) -> Self {
        Self { tol, h_max: f64::INFINITY, max_steps: 20_000_000, safe: 0.9, fac_min: 0.333, fac_max: 6.0 }
    }

    pub fn with_h_max(mut self, h_max: f64) -> Self {
        self.h_max = h_max;
        self
    }

    /// Advances `y` from `t0` to `t1 >= t0`. `on_step(t, y)` sees every accepted
    /// state and may abort the integration by returning an error.
    pub fn integrate<const N: usize, S, F>(
        &self,
        sys: &S,
        t0: f64,
        t1: f64,
        y: &mut [Complex64; N],
        mut on_step: F,
    ) -> Result<StepStats>
    where
        S: System<N>,
        F: FnMut(f64, &[Complex64; N]) -> Result<()>,
    {
        let mut stats = StepStats::default();
        let span = t1 - t0;
        if span <= 0.0 {
            return Ok(stats);
        }
        let zero = Complex64::new(0.0, 0.0);
        let mut k = [[zero; N]; 12];
        let mut stage = [zero; N];
        let mut y_new = [zero; N];

        let mut t = t0;
        sys.rhs(t, y, &mut k[0]);
        stats.evaluations += 1;
        let mut h = self.initial_step(sys, t, y, &k[0], span, &mut stats).min(self.h_max);
        let mut last_rejected = false;

        loop {
            if stats.accepted + stats.rejected >= self.max_steps || h < 1e-14 * t.abs().max(span) {
                return Err(SimError::StepSizeUnderflow { t, step: h, steps: stats.accepted });
            }
            let last = t + h >= t1;
            if last {
                h = t1 - t;
            }

            for i in 1..12 {
                for n in 0..N {
                    let mut acc = zero;
                    for j in 0..i {
                        let a = A[i][j];
                        if a != 0.0 {
                            acc += k[j][n] * a;
                        }
                    }
                    stage[n] = y[n] + acc * h;
                }
                sys.rhs(t + C[i] * h, &stage, &mut k[i]);
            }
            stats.evaluations += 11;

            let (mut err5, mut err3) = (0.0f64, 0.0f64);
            for n in 0..N {
                let mut b_sum = zero;
                let mut e_sum = zero;
                for s in 0..12 {
                    if B[s] != 0.0 {
                        b_sum += k[s][n] * B[s];
                    }
                    if ER[s] != 0.0 {
                        e_sum += k[s][n] * ER[s];
                    }
                }
                y_new[n] = y[n] + b_sum * h;
                let e3 = b_sum - k[0][n] * BHH[0] - k[8][n] * BHH[1] - k[11][n] * BHH[2];
                let sk_re = self.tol.abs + self.tol.rel * y[n].re.abs().max(y_new[n].re.abs());
                let sk_im = self.tol.abs + self.tol.rel * y[n].im.abs().max(y_new[n].im.abs());
                err5 += (e_sum.re / sk_re).powi(2) + (e_sum.im / sk_im).powi(2);
                err3 += (e3.re / sk_re).powi(2) + (e3.im / sk_im).powi(2);
            }
            let mut deno = err5 + 0.01 * err3;
            if deno <= 0.0 {
                deno = 1.0;
            }
            let err = h.abs() * err5 * (1.0 / (deno * (2 * N) as f64)).sqrt();

            let fac11 = err.powf(1.0 / 8.0);
            let fac = (fac11 / self.safe).clamp(1.0 / self.fac_max, 1.0 / self.fac_min);
            let mut h_new = h / fac;

            if err <= 1.0 && err.is_finite() {
                t = if last { t1 } else { t + h };
                *y = y_new;
                stats.accepted += 1;
                on_step(t, y)?;
                if last {
                    return Ok(stats);
                }
                sys.rhs(t, y, &mut k[0]);
                stats.evaluations += 1;
                if last_rejected {
                    h_new = h_new.min(h);
                }
                last_rejected = false;
            } else {
                stats.rejected += 1;
                h_new = if err.is_finite() { h / (fac11 / self.safe).min(1.0 / self.fac_min) } else { 0.1 * h };
                last_rejected = true;
            }
            h = h_new.min(self.h_max);
        }
    }

    fn initial_step<const N: usize, S: System<N>>(
        &self,
        sys: &S,
        t: f64,
        y: &[Complex64; N],
        f0: &[Complex64; N],
        span: f64,
        stats: &mut StepStats,
    ) -> f64 {
        let sk = |c: Complex64| self.tol.abs + self.tol.rel * c.norm();
        let (mut dnf, mut dny) = (0.0, 0.0);
        for n in 0..N {
            dnf += (f0[n].norm() / sk(y[n])).powi(2);
            dny += (y[n].norm() / sk(y[n])).powi(2);
        }
        let mut h = if dnf <= 1e-10 || dny <= 1e-10 { 1e-6 * span } else { 0.01 * (dny / dnf).sqrt() };
        h = h.min(span);
        let mut y1 = [Complex64::new(0.0, 0.0); N];
        for n in 0..N {
            y1[n] = y[n] + f0[n] * h;
        }
        let mut f1 = [Complex64::new(0.0, 0.0); N];
        sys.rhs(t + h, &y1, &mut f1);
        stats.evaluations += 1;
        let mut der2 = 0.0;
        for n in 0..N {
            der2 += ((f1[n] - f0[n]).norm() / sk(y[n])).powi(2);
        }
        let der2 = der2.sqrt() / h;
        let der12 = der2.max(dnf.sqrt());
        let h1 = if der12 <= 1e-15 { (1e-6f64).max(h * 1e-3) } else { (0.01 / der12).powf(1.0 / 8.0) };
        (100.0 * h).min(h1).min(span)
    }
}

include!("ode_tableau.rs");
