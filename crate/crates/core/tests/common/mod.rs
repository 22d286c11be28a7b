#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use evasim::bloch::{local_steady_state, propagate_time, DensityMatrix, E4, G2};
use evasim::constants::{RB_D1_WAVELENGTH, RB_D2_WAVELENGTH};
use evasim::model::{evanescent_kappa, DriveParams, PrismGeometry, PumpGeometry, VaporParams};

pub fn geometry() -> PrismGeometry {
    PrismGeometry::new(1.52, 43f64.to_radians(), RB_D2_WAVELENGTH, RB_D1_WAVELENGTH).unwrap()
}

pub fn vapor() -> VaporParams {
    VaporParams::default()
}

pub fn drive(pump: f64, probe: f64, pump_det: f64, probe_det: f64) -> DriveParams {
    DriveParams {
        rabi_pump: pump,
        rabi_probe_surface: probe,
        detuning_pump: pump_det,
        detuning_probe: probe_det,
        pump_geometry: PumpGeometry::PerpendicularPlaneWave,
    }
}

/// Propagates with doubling horizons until successive states agree.
pub fn relax(rho0: &DensityMatrix, z: f64, d: &DriveParams) -> DensityMatrix {
    let v = vapor();
    let g = geometry();
    let base = 50.0 / v.gamma3.min(v.gamma4);
    let mut rho = propagate_time(rho0, base, z, d, &v, &g).unwrap();
    let mut span = base;
    for _ in 0..24 {
        let next = propagate_time(&rho, span, z, d, &v, &g).unwrap();
        let change = next.max_abs_diff(&rho);
        rho = next;
        span *= 2.0;
        if change < 1e-10 {
            return rho;
        }
    }
    panic!("propagation did not settle");
}

/// Largest elementwise gap between the local steady state and long-time
/// propagation over `draws` random drives.
pub fn steady_state_oracle_worst(draws: usize, seed: u64) -> f64 {
    let v = vapor();
    let kappa = evanescent_kappa(&geometry()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..draws {
        let pump = rng.random_range(0.0..20.0) * v.gamma3;
        let probe = rng.random_range(0.3..3.0) * v.gamma4;
        let pump_det = rng.random_range(-3.0..3.0) * v.gamma3;
        let line = if rng.random_bool(0.5) { 0.0 } else { -v.hfs_splitting };
        let probe_det = line + rng.random_range(-3.0..3.0) * v.gamma4;
        let z = rng.random_range(0.0..1.5) / kappa;
        let d = drive(pump, probe, pump_det, probe_det);
        let steady = local_steady_state(z, &d, &v, &geometry()).unwrap();
        let relaxed = relax(&DensityMatrix::thermal_ground(), z, &d);
        worst = worst.max(steady.max_abs_diff(&relaxed));
    }
    worst
}

/// Worst relative deviation of weak-probe Im ρ₂₄ from the Lorentzian of
/// half-width Γ₄/2, starting in |2⟩ and propagating for 30/Γ₄.
pub fn lorentzian_worst() -> f64 {
    let v = vapor();
    let g4 = v.gamma4;
    let omega = 1e-3 * g4;
    let start = DensityMatrix::from_populations([0.0, 1.0, 0.0, 0.0]);
    let mut worst: f64 = 0.0;
    for k in -16..=16 {
        let delta = 0.25 * k as f64 * g4;
        let d = drive(0.0, omega, 0.0, delta);
        let rho = propagate_time(&start, 30.0 / g4, 0.0, &d, &v, &geometry()).unwrap();
        let w = rho.population(G2) - rho.population(E4);
        let lorentz = omega * w * (g4 / 2.0) / (delta * delta + g4 * g4 / 4.0);
        worst = worst.max((rho.get(G2, E4).im - lorentz).abs() / lorentz);
    }
    worst
}
