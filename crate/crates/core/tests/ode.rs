use approx::assert_relative_eq;
use num_complex::Complex64;

use evasim::ode::{Dop853, System, Tolerances};
use evasim::SimError;

struct Oscillator {
    omega: f64,
    damping: f64,
}

impl System<1> for Oscillator {
    fn rhs(&self, _t: f64, y: &[Complex64; 1], dy: &mut [Complex64; 1]) {
        dy[0] = Complex64::new(-self.damping, -self.omega) * y[0];
    }
}

struct Polynomial;

impl System<2> for Polynomial {
    fn rhs(&self, t: f64, _y: &[Complex64; 2], dy: &mut [Complex64; 2]) {
        dy[0] = Complex64::new(7.0 * t.powi(6), 0.0);
        dy[1] = Complex64::new(0.0, 1.0);
    }
}

#[test]
fn integrates_high_degree_polynomial_exactly() {
    let mut y = [Complex64::new(0.0, 0.0); 2];
    Dop853::new(Tolerances::default()).integrate(&Polynomial, 0.0, 2.0, &mut y, |_, _| Ok(())).unwrap();
    assert_relative_eq!(y[0].re, 128.0, max_relative = 1e-12);
    assert_relative_eq!(y[1].im, 2.0, max_relative = 1e-12);
}

#[test]
fn damped_rotation_matches_closed_form() {
    let sys = Oscillator { omega: 2.0e10, damping: 3.0e7 };
    let t1 = 5.0e-8;
    let mut y = [Complex64::new(1.0, 0.0)];
    let tol = Tolerances { rel: 1e-10, abs: 1e-12 };
    let stats = Dop853::new(tol).integrate(&sys, 0.0, t1, &mut y, |_, _| Ok(())).unwrap();
    let exact = Complex64::new(-sys.damping * t1, -sys.omega * t1).exp();
    assert!((y[0] - exact).norm() < 1e-7, "err {}", (y[0] - exact).norm());
    assert!(stats.accepted > 100);
}

#[test]
fn zero_span_is_identity() {
    let mut y = [Complex64::new(0.3, -0.2)];
    let stats = Dop853::new(Tolerances::default())
        .integrate(&Oscillator { omega: 1.0, damping: 0.0 }, 1.0, 1.0, &mut y, |_, _| Ok(()))
        .unwrap();
    assert_eq!(y[0], Complex64::new(0.3, -0.2));
    assert_eq!(stats.accepted, 0);
}

#[test]
fn hard_step_limit_reports_underflow() {
    let mut solver = Dop853::new(Tolerances::default());
    solver.max_steps = 10;
    let mut y = [Complex64::new(1.0, 0.0)];
    let res = solver.integrate(&Oscillator { omega: 1e12, damping: 0.0 }, 0.0, 1e-6, &mut y, |_, _| Ok(()));
    assert!(matches!(res, Err(SimError::StepSizeUnderflow { .. })));
}
