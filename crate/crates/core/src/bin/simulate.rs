use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use clap::{Parser, ValueEnum};

use evasim::bloch::propagate::TRACE_TOLERANCE;
use evasim::config::{ConfigError, ConfigFile};
use evasim::constants::rad_to_hz;
use evasim::model::PumpGeometry;
use evasim::output::{spectrum_csv, write_atomic, RunManifest, RunStatus, StageDiagnostics};
use evasim::scan::{pump_power_series, sweep_selected, PumpSelection};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Geometry {
    Perpendicular,
    Copropagating,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Pump {
    Off,
    On,
    Both,
}

/// Simulate evanescent-wave reflectivity spectra with and without optical pumping.
#[derive(Debug, Parser)]
#[command(name = "simulate", version)]
struct Args {
    /// TOML run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output directory, created if missing.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// One spectrum per entry of sweep.pump_power_series_hz, plus power_series.csv.
    #[arg(long)]
    power_series: bool,
    /// Overrides drive.pump_geometry.
    #[arg(long, value_enum)]
    geometry: Option<Geometry>,
    #[arg(long, value_enum, default_value = "both")]
    pump: Pump,
    /// Worker threads; 0 lets the pool decide.
    #[arg(long, env = "SIM_THREADS", default_value_t = 0)]
    threads: usize,
    /// Check the configuration, report every violation and exit.
    #[arg(long)]
    validate: bool,
}

enum Failure {
    Config(String),
    Numerical(String),
}

fn load(args: &Args) -> Result<(ConfigFile, evasim::scan::ExperimentConfig), Failure> {
    let mut file = ConfigFile::load(&args.config).map_err(|e| Failure::Config(e.to_string()))?;
    match args.geometry {
        Some(Geometry::Perpendicular) => file.drive.pump_geometry = PumpGeometry::PerpendicularPlaneWave,
        Some(Geometry::Copropagating) => file.drive.pump_geometry = PumpGeometry::CoPropagatingEvanescent,
        None => {}
    }
    let experiment = file.resolve().map_err(|e: ConfigError| Failure::Config(e.to_string()))?;
    Ok((file, experiment))
}

fn write(path: &Path, contents: &str) -> Result<(), Failure> {
    write_atomic(path, contents.as_bytes()).map_err(|e| Failure::Numerical(format!("writing {}: {e}", path.display())))
}

fn run(args: &Args, manifest: &mut RunManifest, experiment: &evasim::scan::ExperimentConfig) -> Result<(), Failure> {
    let numerical = |stage: &str, e: evasim::SimError| Failure::Numerical(format!("stage {stage}: {e}"));
    if args.power_series {
        let values = experiment.sweep.pump_power_series.clone();
        let series = pump_power_series(experiment, &values).map_err(|e| numerical("power_series", e))?;
        let mut index = String::from("index,rabi_pump_hz,file\n");
        for (i, (rabi, spectrum)) in series.iter().enumerate() {
            let name = format!("spectrum_pump_{i:02}.csv");
            write(&args.out.join(&name), &spectrum_csv(spectrum, PumpSelection::Both))?;
            index.push_str(&format!("{i},{:e},{name}\n", rad_to_hz(*rabi)));
            if i == 0 {
                manifest.stages.push(StageDiagnostics::new("pump_off", &manifest.config, &spectrum.diagnostics_off, None));
            }
            let stage = format!("pump_on_{i:02}");
            manifest.stages.push(StageDiagnostics::new(&stage, &manifest.config, &spectrum.diagnostics_on, Some(name)));
        }
        write(&args.out.join("power_series.csv"), &index)?;
    } else {
        let selection = manifest.pump;
        let grid = experiment.sweep.grid().map_err(|e| numerical("grid", e))?;
        let spectrum = sweep_selected(experiment, &grid, selection).map_err(|e| numerical("spectrum", e))?;
        write(&args.out.join("spectrum.csv"), &spectrum_csv(&spectrum, selection))?;
        let out = Some("spectrum.csv".to_string());
        if selection.off() {
            manifest.stages.push(StageDiagnostics::new("pump_off", &manifest.config, &spectrum.diagnostics_off, out.clone()));
        }
        if selection.on() {
            manifest.stages.push(StageDiagnostics::new("pump_on", &manifest.config, &spectrum.diagnostics_on, out));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let args = Args::parse();
    let (file, experiment) = match load(&args) {
        Ok(v) => v,
        Err(Failure::Config(msg)) | Err(Failure::Numerical(msg)) => {
            eprintln!("simulate: {msg}");
            return ExitCode::from(2);
        }
    };
    if args.validate {
        println!("{}: OK", args.config.display());
        return ExitCode::SUCCESS;
    }
    if let Err(e) = std::fs::create_dir_all(&args.out) {
        eprintln!("simulate: cannot create {}: {e}", args.out.display());
        return ExitCode::from(2);
    }
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(args.threads).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("simulate: thread pool: {e}");
            return ExitCode::from(2);
        }
    };
    let started = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs_f64()).unwrap_or(0.0);
    let clock = Instant::now();
    let mut manifest = RunManifest {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        status: RunStatus::Ok,
        started_unix_s: started,
        wall_clock_s: 0.0,
        threads: pool.current_num_threads(),
        pump: match args.pump {
            Pump::Off => PumpSelection::Off,
            Pump::On => PumpSelection::On,
            Pump::Both => PumpSelection::Both,
        },
        power_series: args.power_series,
        trace_tolerance: TRACE_TOLERANCE,
        config: file,
        stages: Vec::new(),
        failure: None,
    };
    let outcome = pool.install(|| run(&args, &mut manifest, &experiment));
    if let Err(Failure::Numerical(msg) | Failure::Config(msg)) = &outcome {
        manifest.status = RunStatus::Failed;
        manifest.failure = Some(msg.clone());
    }
    manifest.wall_clock_s = clock.elapsed().as_secs_f64();
    manifest.finalize();
    if let Err(e) = write_atomic(&args.out.join("manifest.json"), manifest.to_json().as_bytes()) {
        eprintln!("simulate: writing manifest: {e}");
        return ExitCode::FAILURE;
    }
    match manifest.status {
        RunStatus::Ok => ExitCode::SUCCESS,
        RunStatus::Failed => {
            eprintln!("simulate: FAILED: {}", manifest.failure.as_deref().unwrap_or("unknown"));
            ExitCode::FAILURE
        }
    }
}
