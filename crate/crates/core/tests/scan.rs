use std::sync::OnceLock;

use num_complex::Complex64;

use evasim::config::ConfigFile;
use evasim::model::PumpGeometry;
use evasim::numerics::Numerics;
use evasim::optics::reflectivity_from_chi;
use evasim::scan::{
    baseline, copropagating_control, dip_metrics, difference_peak, find_dips, line_windows, pump_power_series,
    sweep_selected, sweep_spectrum, ExperimentConfig, PumpSelection, Spectrum, SpectrumRecord, SweepParams,
};
use evasim::thermal::ThermalAverager;
use evasim::SimError;

fn default_config() -> ExperimentConfig {
    ConfigFile::default().resolve().unwrap()
}

/// A coarse configuration for checks that do not depend on accuracy.
fn cheap_config(points: usize) -> ExperimentConfig {
    let mut c = default_config();
    c.numerics = Numerics { order_x: 8, order_z: 8, ..c.numerics };
    c.sweep.points = points;
    c
}

fn default_spectrum() -> &'static Spectrum {
    static CELL: OnceLock<Spectrum> = OnceLock::new();
    CELL.get_or_init(|| {
        let c = default_config();
        sweep_spectrum(&c, &c.sweep.grid().unwrap()).unwrap()
    })
}

fn records(x: &[f64], off: &[f64], on: &[f64]) -> Vec<SpectrumRecord> {
    (0..x.len())
        .map(|i| SpectrumRecord {
            detuning_probe: x[i],
            r_pump_off: off[i],
            r_pump_on: on[i],
            chi_off: Complex64::new(0.0, 0.0),
            chi_on: Complex64::new(0.0, 0.0),
        })
        .collect()
}

#[test]
fn sweep_grid_is_uniform_and_inclusive() {
    let s = SweepParams { detuning_min: -3.0, detuning_max: 5.0, points: 5, pump_power_series: vec![] };
    assert_eq!(s.grid().unwrap(), vec![-3.0, -1.0, 1.0, 3.0, 5.0]);
    let bad = SweepParams { points: 1, ..s.clone() };
    assert!(bad.grid().is_err());
    let reversed = SweepParams { detuning_min: 5.0, detuning_max: -3.0, ..s };
    assert_eq!(reversed.violations().len(), 1);
}

#[test]
fn power_series_must_be_non_negative_and_descending() {
    let c = cheap_config(5);
    for values in [vec![1.0, 2.0], vec![1.0, -1.0]] {
        match pump_power_series(&c, &values) {
            Err(SimError::InvalidInput(msg)) => assert!(msg.contains("pump_power_series"), "{msg}"),
            other => panic!("expected InvalidInput, got {other:?}"),
        }
    }
}

#[test]
fn unsorted_detunings_are_rejected() {
    let c = cheap_config(5);
    assert!(sweep_spectrum(&c, &[0.0, 0.0]).is_err());
    assert!(sweep_spectrum(&c, &[1.0, 0.0]).is_err());
    assert!(sweep_spectrum(&c, &[0.0]).is_err());
}

#[test]
fn empty_vapor_reflects_totally() {
    let mut c = cheap_config(9);
    c.vapor.chi_amplitude = 0.0;
    let s = sweep_spectrum(&c, &c.sweep.grid().unwrap()).unwrap();
    for r in &s.records {
        assert!((r.r_pump_off - 1.0).abs() < 1e-12 && (r.r_pump_on - 1.0).abs() < 1e-12);
    }
}

#[test]
fn selected_halves_match_the_full_sweep() {
    let c = cheap_config(9);
    let grid = c.sweep.grid().unwrap();
    let both = sweep_spectrum(&c, &grid).unwrap();
    let off = sweep_selected(&c, &grid, PumpSelection::Off).unwrap();
    let on = sweep_selected(&c, &grid, PumpSelection::On).unwrap();
    assert_eq!(off.r_off(), both.r_off());
    assert_eq!(on.r_on(), both.r_on());
    assert_eq!(off.diagnostics_on.trajectories, 0);
    assert_eq!(on.diagnostics_off.trajectories, 0);
}

#[test]
fn power_series_endpoints() {
    let c = cheap_config(31);
    let values = [c.drive.rabi_pump, 0.5 * c.drive.rabi_pump, 0.0];
    let series = pump_power_series(&c, &values).unwrap();
    assert_eq!(series.len(), 3);
    let full = sweep_spectrum(&c, &c.sweep.grid().unwrap()).unwrap();
    assert_eq!(series[0].1.r_on(), full.r_on());
    for (a, b) in series[2].1.r_on().iter().zip(series[2].1.r_off()) {
        assert!((a - b).abs() <= 1e-12);
    }
    for (_, s) in &series {
        assert_eq!(s.r_off(), full.r_off());
    }
}

#[test]
fn copropagating_control_checks_geometry() {
    let c = cheap_config(5);
    assert!(matches!(copropagating_control(&c), Err(SimError::InvalidInput(_))));

    let mut c = cheap_config(5);
    c.drive.pump_geometry = PumpGeometry::CoPropagatingEvanescent;
    c.drive.rabi_pump = 0.0;
    let s = copropagating_control(&c).unwrap();
    for r in &s.records {
        assert!((r.r_pump_on - r.r_pump_off).abs() <= 1e-12);
    }
}

#[test]
fn dip_metrics_of_a_synthetic_gaussian() {
    let x: Vec<f64> = (0..801).map(|i| -4.0 + 0.01 * i as f64).collect();
    let sigma = 0.3;
    let dip = |x: f64, depth: f64| 0.9 - depth * (-(x - 0.5).powi(2) / (2.0 * sigma * sigma)).exp();
    let off: Vec<f64> = x.iter().map(|&v| dip(v, 0.2)).collect();
    let on: Vec<f64> = x.iter().map(|&v| dip(v, 0.05)).collect();

    let same = dip_metrics(&records(&x, &off, &off), &records(&x, &off, &off), (-4.0, 4.0)).unwrap();
    assert!((same.suppression_ratio - 1.0).abs() < 1e-12);

    let m = dip_metrics(&records(&x, &off, &on), &records(&x, &off, &on), (-4.0, 4.0)).unwrap();
    assert!((m.depth_off - 0.2).abs() < 1e-9);
    assert!((m.suppression_ratio - 0.25).abs() < 1e-9);
    assert!((m.line_center - 0.5).abs() < 1e-9);
    let fwhm = (8.0 * 2f64.ln()).sqrt() * sigma;
    assert!((m.fwhm_off - fwhm).abs() < 1e-3 * fwhm, "{} vs {fwhm}", m.fwhm_off);

    let flat = vec![0.9; x.len()];
    assert!(matches!(
        dip_metrics(&records(&x, &flat, &flat), &records(&x, &flat, &flat), (-4.0, 4.0)),
        Err(SimError::NoDipFound { .. })
    ));
}

#[test]
fn dips_and_baseline_of_a_synthetic_doublet() {
    let x: Vec<f64> = (0..401).map(|i| -2.0 + 0.01 * i as f64).collect();
    let r: Vec<f64> = x
        .iter()
        .map(|&v| 1.0 - 0.3 * (-(v + 0.7f64).powi(2) / 0.02).exp() - 0.1 * (-(v - 0.8f64).powi(2) / 0.02).exp())
        .collect();
    let (level, noise) = baseline(&r);
    assert!((level - 1.0).abs() < 1e-12 && noise < 1e-12);
    let dips = find_dips(&r, 0.05);
    assert_eq!(dips.len(), 2);
    assert!((x[dips[0]] + 0.7).abs() < 1e-9 && (x[dips[1]] - 0.8).abs() < 1e-9);
    assert_eq!(find_dips(&r, 0.2).len(), 1);
}

#[test]
fn difference_peak_of_a_synthetic_pair() {
    let x: Vec<f64> = (0..401).map(|i| -2.0 + 0.01 * i as f64).collect();
    let off: Vec<f64> = x.iter().map(|&v| 1.0 - 0.2 * (-(v * v) / 0.5).exp()).collect();
    let on: Vec<f64> = x.iter().map(|&v| 1.0 - 0.2 * (-(v * v) / 0.5).exp() + 0.1 * (-(v * v) / 0.02).exp()).collect();
    let s = Spectrum {
        records: records(&x, &off, &on),
        diagnostics_off: Default::default(),
        diagnostics_on: Default::default(),
    };
    let (center, width) = difference_peak(&s).unwrap();
    assert!(center.abs() < 1e-9);
    let expected = 2.0 * (0.02 * 2f64.ln()).sqrt();
    assert!((width - expected).abs() < 1e-3, "{width} vs {expected}");
}

#[test]
fn default_spectrum_is_bounded_and_finite() {
    let s = default_spectrum();
    for r in &s.records {
        for v in [r.r_pump_off, r.r_pump_on] {
            assert!(v.is_finite() && (0.0..=1.0).contains(&v), "R = {v}");
        }
    }
}

#[test]
fn unpumped_line_stays_bounded() {
    let c = default_config();
    let s = default_spectrum();
    let (unpumped, _) = line_windows(&c.vapor, &s.detunings());
    let m = dip_metrics(&s.records, &s.records, unpumped).unwrap();
    assert!((1.0..=2.0).contains(&m.suppression_ratio), "depth_on/depth_off = {}", m.suppression_ratio);
}

#[test]
fn grid_refinement_changes_the_line_metrics_by_under_one_percent() {
    let c = default_config();
    let coarse = default_spectrum();
    let fine = {
        let mut f = c.clone();
        f.sweep.points = 2 * c.sweep.points - 1;
        sweep_spectrum(&f, &f.sweep.grid().unwrap()).unwrap()
    };
    let (a, b) = line_windows(&c.vapor, &coarse.detunings());
    for window in [a, b] {
        let m1 = dip_metrics(&coarse.records, &coarse.records, window).unwrap();
        let m2 = dip_metrics(&fine.records, &fine.records, window).unwrap();
        for (name, x, y) in [
            ("depth_off", m1.depth_off, m2.depth_off),
            ("depth_on", m1.depth_on, m2.depth_on),
            ("fwhm_off", m1.fwhm_off, m2.fwhm_off),
        ] {
            assert!((x - y).abs() <= 0.01 * y, "{name}: {x:e} at 241 points vs {y:e} at 481");
        }
    }
}

#[test]
fn baseline_and_wing_falloff() {
    let c = default_config();
    let s = default_spectrum();
    let (red_window, blue_window) = line_windows(&c.vapor, &s.detunings());
    let red = dip_metrics(&s.records, &s.records, red_window).unwrap();
    let blue = dip_metrics(&s.records, &s.records, blue_window).unwrap();
    let width = red.fwhm_off;
    let depth = red.depth_off.max(blue.depth_off);
    let avg = ThermalAverager::new(&c.vapor, &c.prism, &c.numerics).unwrap();
    let line = red.line_center;
    let pts = [line - 40.0 * width, line - 30.0 * width, line - 20.0 * width, blue.line_center + 40.0 * width];
    let far = avg.chi_spectrum(&c.drive.pump_off(), &pts).unwrap();
    for i in [0, 3] {
        let loss = 1.0 - reflectivity_from_chi(&c.prism, far.chi[i]);
        assert!(loss.abs() <= 1e-4 * depth, "1 − R = {loss:e} at 40 widths, depth {depth:e}");
    }
    // Lorentzian wings: Im χ(20)/Im χ(30) ≈ (30/20)²
    let ratio = far.chi[2].im / far.chi[1].im;
    assert!((ratio / 2.25 - 1.0).abs() < 0.15, "wing ratio {ratio}");
}
