//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion.
//!
//! Criteria listed in `KNOWN_FAILURES` are reported as FAIL but do not fail
//! the target; any other failure does, and so does a known failure that
//! starts passing.

mod common;

use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode};
use std::time::Instant;

use num_complex::Complex64;

use evasim::config::ConfigFile;
use evasim::constants::hz_to_rad;
use evasim::model::PumpGeometry;
use evasim::numerics::Numerics;
use evasim::scan::{
    baseline, copropagating_control, difference_peak, dip_metrics, find_dips, line_windows, pump_power_series,
    ExperimentConfig, SpectrumRecord,
};
use evasim::thermal::{build_velocity_grid, ThermalAverager};

use common::{lorentzian_worst, steady_state_oracle_worst};

const KNOWN_FAILURES: &[&str] = &["pumping suppression"];

/// Quadrature order used for the co-propagating sweep.
const COPROPAGATING_ORDER: usize = 16;

struct Check {
    name: &'static str,
    pass: bool,
    detail: String,
}

fn ghz(rad_per_s: f64) -> f64 {
    rad_per_s / (2.0 * std::f64::consts::PI) / 1e9
}

fn default_config() -> ExperimentConfig {
    ConfigFile::default().resolve().unwrap()
}

struct CliRun {
    csv: Vec<u8>,
    records: Vec<SpectrumRecord>,
    manifest: serde_json::Value,
}

fn run_cli(out: &Path, threads: usize) -> CliRun {
    let config = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs/default.toml");
    let status = Command::new(env!("CARGO_BIN_EXE_simulate"))
        .arg("--config")
        .arg(&config)
        .arg("--out")
        .arg(out)
        .args(["--threads", &threads.to_string()])
        .status()
        .expect("simulate runs");
    assert!(status.success(), "simulate exited with {status}");
    let csv = std::fs::read(out.join("spectrum.csv")).unwrap();
    let text = String::from_utf8(csv.clone()).unwrap();
    let records = text
        .lines()
        .skip(1)
        .map(|line| {
            let v: Vec<f64> = line.split(',').map(|c| c.parse().unwrap()).collect();
            SpectrumRecord {
                detuning_probe: hz_to_rad(v[0]),
                r_pump_off: v[1],
                r_pump_on: v[2],
                chi_off: Complex64::new(v[5], v[3]),
                chi_on: Complex64::new(v[6], v[4]),
            }
        })
        .collect();
    let manifest = serde_json::from_str(&std::fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap();
    CliRun { csv, records, manifest }
}

fn line_splitting(run: &CliRun, config: &ExperimentConfig) -> Check {
    let r: Vec<f64> = run.records.iter().map(|r| r.r_pump_off).collect();
    let x: Vec<f64> = run.records.iter().map(|r| r.detuning_probe).collect();
    let (_, noise) = baseline(&r);
    let dips = find_dips(&r, 10.0 * noise.max(1e-12));
    let step = x[1] - x[0];
    let (a, b) = line_windows(&config.vapor, &x);
    let (ma, mb) = match (dip_metrics(&run.records, &run.records, a), dip_metrics(&run.records, &run.records, b)) {
        (Ok(ma), Ok(mb)) => (ma, mb),
        (ea, eb) => {
            return Check { name: "line splitting", pass: false, detail: format!("{ea:?} {eb:?}") };
        }
    };
    let separation = mb.line_center - ma.line_center;
    let wall = run.manifest["wall_clock_s"].as_f64().unwrap_or(f64::NAN);
    let pass = dips.len() == 2 && (separation - hz_to_rad(3.035e9)).abs() <= step && wall <= 600.0;
    Check {
        name: "line splitting",
        pass,
        detail: format!(
            "{} dips, separation {:.4} GHz (step {:.4} GHz); sweep took {wall:.0} s on {} thread(s)",
            dips.len(),
            ghz(separation),
            ghz(step),
            run.manifest["threads"]
        ),
    }
}

fn doppler_width(run: &CliRun, config: &ExperimentConfig) -> Check {
    let x: Vec<f64> = run.records.iter().map(|r| r.detuning_probe).collect();
    let (a, b) = line_windows(&config.vapor, &x);
    let mut widths = Vec::new();
    for w in [a, b] {
        match dip_metrics(&run.records, &run.records, w) {
            Ok(m) => widths.push(ghz(m.fwhm_off) * 1e3),
            Err(e) => return Check { name: "Doppler width", pass: false, detail: e.to_string() },
        }
    }
    Check {
        name: "Doppler width",
        pass: widths.iter().all(|w| (450.0..=780.0).contains(w)),
        detail: format!("pump-off FWHM {:.0} MHz and {:.0} MHz, bound [450, 780] MHz", widths[0], widths[1]),
    }
}

fn suppression(run: &CliRun, config: &ExperimentConfig) -> Check {
    let x: Vec<f64> = run.records.iter().map(|r| r.detuning_probe).collect();
    let (_, pumped) = line_windows(&config.vapor, &x);
    match dip_metrics(&run.records, &run.records, pumped) {
        Ok(m) => Check {
            name: "pumping suppression",
            pass: m.suppression_ratio <= 0.1,
            detail: format!(
                "suppression_ratio {:.3} (depth {:.4} -> {:.4}), bound <= 0.1",
                m.suppression_ratio, m.depth_off, m.depth_on
            ),
        },
        Err(e) => Check { name: "pumping suppression", pass: false, detail: e.to_string() },
    }
}

fn power_monotonicity(config: &ExperimentConfig) -> Check {
    let name = "power monotonicity";
    let series = match pump_power_series(config, &config.sweep.pump_power_series) {
        Ok(s) => s,
        Err(e) => return Check { name, pass: false, detail: e.to_string() },
    };
    let mut ratios = Vec::new();
    for (_, s) in &series {
        let (_, pumped) = line_windows(&config.vapor, &s.detunings());
        match dip_metrics(&s.records, &s.records, pumped) {
            Ok(m) => ratios.push(m.suppression_ratio),
            Err(e) => return Check { name, pass: false, detail: e.to_string() },
        }
    }
    // the ladder is in descending Ω_pu
    let pass = ratios.windows(2).all(|p| p[0] <= p[1]);
    let pairs: Vec<String> = series
        .iter()
        .zip(&ratios)
        .map(|((rabi, _), r)| format!("{:.2}Γ₃:{r:.3}", rabi / config.vapor.gamma3))
        .collect();
    Check { name, pass, detail: format!("suppression_ratio {}", pairs.join(" ")) }
}

fn geometry_control() -> Check {
    let name = "geometry control";
    let mut config = default_config();
    config.drive.pump_geometry = PumpGeometry::CoPropagatingEvanescent;
    config.numerics = Numerics { order_x: COPROPAGATING_ORDER, order_z: COPROPAGATING_ORDER, ..config.numerics };
    let s = match copropagating_control(&config) {
        Ok(s) => s,
        Err(e) => return Check { name, pass: false, detail: e.to_string() },
    };
    let (_, pumped) = line_windows(&config.vapor, &s.detunings());
    let m = match dip_metrics(&s.records, &s.records, pumped) {
        Ok(m) => m,
        Err(e) => return Check { name, pass: false, detail: e.to_string() },
    };
    // the Doppler FWHM as measured by the Doppler-width criterion: the pump-off dip width
    let doppler = m.fwhm_off;
    let Some((center, width)) = difference_peak(&s) else {
        return Check { name, pass: false, detail: "no on-off difference".into() };
    };
    Check {
        name,
        pass: m.suppression_ratio > 0.5 && width < 0.3 * doppler,
        detail: format!(
            "order {COPROPAGATING_ORDER}: suppression_ratio {:.3} (> 0.5); difference peak at {:.3} GHz, width {:.0} MHz vs 0.3 x pump-off FWHM {:.0} MHz",
            m.suppression_ratio,
            ghz(center),
            ghz(width) * 1e3,
            ghz(0.3 * doppler) * 1e3
        ),
    }
}

fn z_max_doubling(config: &ExperimentConfig) -> f64 {
    let centers = [-config.vapor.hfs_splitting, 0.0];
    let chi = |z_max: f64, pump_on: bool| {
        let numerics = Numerics { z_max_over_delta: z_max, ..config.numerics };
        let drive = if pump_on { config.drive } else { config.drive.pump_off() };
        ThermalAverager::new(&config.vapor, &config.prism, &numerics).unwrap().chi_spectrum(&drive, &centers).unwrap().chi
    };
    let base = config.numerics.z_max_over_delta;
    let mut worst: f64 = 0.0;
    for pump_on in [false, true] {
        for (a, b) in chi(base, pump_on).iter().zip(&chi(2.0 * base, pump_on)) {
            worst = worst.max((a - b).norm() / b.norm());
        }
    }
    worst
}

fn invariant_suite(run: &CliRun, config: &ExperimentConfig) -> Check {
    let stages = run.manifest["stages"].as_array().cloned().unwrap_or_default();
    let stat = |key: &str| stages.iter().filter_map(|s| s[key].as_f64()).fold(0.0, f64::max);
    let trace = stat("max_trace_error");
    let herm = stat("max_hermiticity_error");
    let trajectories: u64 = stages.iter().filter_map(|s| s["trajectories"].as_u64()).sum();

    let steady = steady_state_oracle_worst(100, 11);
    let lorentz = lorentzian_worst();

    let vt2 = {
        let v = evasim::model::thermal_velocity(&config.vapor);
        v * v
    };
    let mut grid_err: f64 = 0.0;
    for order in [32, 64] {
        let g = build_velocity_grid(&config.vapor, order, order).unwrap();
        let norm: f64 = g.nodes.iter().map(|n| n.weight).sum();
        let second: f64 = g.nodes.iter().map(|n| n.weight * n.vx * n.vx).sum();
        grid_err = grid_err.max((norm - 1.0).abs()).max((second / vt2 - 1.0).abs());
    }
    let z_max = z_max_doubling(config);

    let pass = trace <= 1e-8 && herm <= 1e-10 && steady <= 1e-6 && lorentz < 0.01 && grid_err <= 1e-10 && z_max < 1e-3;
    Check {
        name: "invariant suite",
        pass,
        detail: format!(
            "trace {trace:.1e} (<= 1e-8) and Hermiticity {herm:.1e} (<= 1e-10) over {trajectories} trajectories; \
             steady state vs propagation {steady:.1e} (<= 1e-6, 100 draws); Lorentzian {lorentz:.1e} (< 1e-2); \
             grid moments {grid_err:.1e} (<= 1e-10); z_max doubling {z_max:.1e} (< 1e-3)"
        ),
    }
}

fn determinism(runs: &[CliRun]) -> Check {
    let same = runs.windows(2).all(|p| p[0].csv == p[1].csv);
    let threads: Vec<String> = runs.iter().map(|r| r.manifest["threads"].to_string()).collect();
    Check {
        name: "determinism",
        pass: same,
        detail: format!("spectrum.csv byte-identical across runs with {} thread(s): {same}", threads.join(", ")),
    }
}

fn main() -> ExitCode {
    let config = default_config();
    let dir = tempfile::tempdir().unwrap();
    let out = |name: &str| -> PathBuf { dir.path().join(name) };
    let started = Instant::now();
    let runs = vec![run_cli(&out("a"), 1), run_cli(&out("b"), 1), run_cli(&out("c"), 4)];

    let checks = vec![
        line_splitting(&runs[0], &config),
        doppler_width(&runs[0], &config),
        suppression(&runs[0], &config),
        power_monotonicity(&config),
        geometry_control(),
        invariant_suite(&runs[0], &config),
        determinism(&runs),
    ];

    let mut bad = 0;
    for c in &checks {
        let known = KNOWN_FAILURES.contains(&c.name);
        let tag = match (c.pass, known) {
            (true, false) => "PASS",
            (false, true) => "FAIL",
            (false, false) => {
                bad += 1;
                "FAIL"
            }
            (true, true) => {
                bad += 1;
                "PASS"
            }
        };
        let note = match (c.pass, known) {
            (false, true) => " [known failure]",
            (true, true) => " [listed as a known failure; update KNOWN_FAILURES]",
            _ => "",
        };
        println!("{tag}  {}: {}{note}", c.name, c.detail);
    }
    println!("acceptance finished in {:.0} s", started.elapsed().as_secs_f64());
    if bad == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
