//! C interface to the simulator.
//!
//! Every function returns an [`EvasimStatus`]; on failure a description is
//! kept per thread and read back with [`evasim_last_error`]. Handles are
//! opaque and owned by the caller, who releases them with the matching
//! `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use evasim::config::{ConfigError, ConfigFile};
use evasim::constants::rad_to_hz;
use evasim::model::PumpGeometry;
use evasim::scan::{dip_metrics, line_windows, sweep_selected, ExperimentConfig, PumpSelection, Spectrum};
use evasim::SimError;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvasimStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ConfigParse = 3,
    ConfigInvalid = 4,
    SubcriticalAngle = 5,
    StepSizeUnderflow = 6,
    SingularSystem = 7,
    NonConvergedQuadrature = 8,
    NoDipFound = 9,
    InvariantViolation = 10,
    InvalidInput = 11,
    OutOfRange = 12,
    Panic = 13,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvasimPump {
    Off = 0,
    On = 1,
    Both = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvasimGeometry {
    Perpendicular = 0,
    Copropagating = 1,
}

/// Which absorption line [`evasim_spectrum_dip_metrics`] measures.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvasimLine {
    /// From |1⟩, at −Δ_HFS.
    Unpumped = 0,
    /// From |2⟩, at zero probe detuning.
    Pumped = 1,
}

/// One spectrum row; frequencies in Hz.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct EvasimRecord {
    pub detuning_hz: f64,
    pub r_pump_off: f64,
    pub r_pump_on: f64,
    pub chi_off_re: f64,
    pub chi_off_im: f64,
    pub chi_on_re: f64,
    pub chi_on_im: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct EvasimDipMetrics {
    pub line_center_hz: f64,
    pub depth_off: f64,
    pub depth_on: f64,
    pub suppression_ratio: f64,
    pub fwhm_off_hz: f64,
}

/// Run configuration, as read from TOML.
pub struct EvasimConfig {
    file: ConfigFile,
}

pub struct EvasimSpectrum {
    config: ExperimentConfig,
    spectrum: Spectrum,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: &str) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn sim_status(e: &SimError) -> EvasimStatus {
    match e {
        SimError::SubcriticalAngle { .. } => EvasimStatus::SubcriticalAngle,
        SimError::StepSizeUnderflow { .. } => EvasimStatus::StepSizeUnderflow,
        SimError::SingularSystem { .. } => EvasimStatus::SingularSystem,
        SimError::NonConvergedQuadrature { .. } => EvasimStatus::NonConvergedQuadrature,
        SimError::NoDipFound { .. } => EvasimStatus::NoDipFound,
        SimError::InvariantViolation(_) => EvasimStatus::InvariantViolation,
        SimError::InvalidInput(_) => EvasimStatus::InvalidInput,
        SimError::AtDetuning { source, .. } => sim_status(source),
    }
}

struct Failure(EvasimStatus, String);

impl From<SimError> for Failure {
    fn from(e: SimError) -> Self {
        Failure(sim_status(&e), e.to_string())
    }
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        let status = match &e {
            ConfigError::Parse { .. } | ConfigError::Io(_) => EvasimStatus::ConfigParse,
            ConfigError::Invalid(_) => EvasimStatus::ConfigInvalid,
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(EvasimStatus::NullPointer, format!("{what} is NULL"))
}

/// Runs `f`, converting errors and panics into a status and the thread's last error.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> EvasimStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            EvasimStatus::Ok
        }
        Ok(Err(Failure(status, message))) => {
            set_error(&message);
            status
        }
        Err(payload) => {
            let message = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(&format!("internal panic: {message}"));
            EvasimStatus::Panic
        }
    }
}

unsafe fn config_ref<'a>(config: *const EvasimConfig) -> Result<&'a EvasimConfig, Failure> {
    config.as_ref().ok_or_else(|| null("config"))
}

unsafe fn config_mut<'a>(config: *mut EvasimConfig) -> Result<&'a mut EvasimConfig, Failure> {
    config.as_mut().ok_or_else(|| null("config"))
}

unsafe fn spectrum_ref<'a>(spectrum: *const EvasimSpectrum) -> Result<&'a EvasimSpectrum, Failure> {
    spectrum.as_ref().ok_or_else(|| null("spectrum"))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn evasim_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failed call on this thread, or an empty string.
/// Valid until the next call into the library from the same thread.
#[no_mangle]
pub extern "C" fn evasim_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Allocates the built-in default configuration.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn evasim_config_default(out: *mut *mut EvasimConfig) -> EvasimStatus {
    guard(|| {
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = Box::into_raw(Box::new(EvasimConfig { file: ConfigFile::default() }));
        Ok(())
    })
}

/// Parses and validates a TOML configuration.
///
/// # Safety
/// `toml` must be a NUL-terminated string and `out` valid for one handle.
#[no_mangle]
pub unsafe extern "C" fn evasim_config_from_toml(toml: *const c_char, out: *mut *mut EvasimConfig) -> EvasimStatus {
    guard(|| {
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = ptr::null_mut();
        if toml.is_null() {
            return Err(null("toml"));
        }
        let text = CStr::from_ptr(toml)
            .to_str()
            .map_err(|e| Failure(EvasimStatus::InvalidUtf8, format!("toml: {e}")))?;
        let file = ConfigFile::parse(text)?;
        file.resolve()?;
        *out = Box::into_raw(Box::new(EvasimConfig { file }));
        Ok(())
    })
}

/// # Safety
/// `config` must be NULL or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn evasim_config_free(config: *mut EvasimConfig) {
    if !config.is_null() {
        drop(Box::from_raw(config));
    }
}

/// Sets the number of sweep points.
///
/// # Safety
/// `config` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn evasim_config_set_points(config: *mut EvasimConfig, points: usize) -> EvasimStatus {
    guard(|| {
        config_mut(config)?.file.sweep.points = points;
        Ok(())
    })
}

/// Sets the probe sweep range in Hz.
///
/// # Safety
/// `config` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn evasim_config_set_sweep_hz(config: *mut EvasimConfig, min_hz: f64, max_hz: f64) -> EvasimStatus {
    guard(|| {
        let s = &mut config_mut(config)?.file.sweep;
        s.detuning_min_hz = min_hz;
        s.detuning_max_hz = max_hz;
        Ok(())
    })
}

/// Sets the velocity quadrature orders.
///
/// # Safety
/// `config` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn evasim_config_set_orders(config: *mut EvasimConfig, order_x: usize, order_z: usize) -> EvasimStatus {
    guard(|| {
        let n = &mut config_mut(config)?.file.numerics;
        n.order_x = order_x;
        n.order_z = order_z;
        Ok(())
    })
}

/// Sets the pump Rabi frequency in Hz.
///
/// # Safety
/// `config` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn evasim_config_set_rabi_pump_hz(config: *mut EvasimConfig, rabi_hz: f64) -> EvasimStatus {
    guard(|| {
        config_mut(config)?.file.drive.rabi_pump_hz = rabi_hz;
        Ok(())
    })
}

/// # Safety
/// `config` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn evasim_config_set_geometry(config: *mut EvasimConfig, geometry: EvasimGeometry) -> EvasimStatus {
    guard(|| {
        config_mut(config)?.file.drive.pump_geometry = match geometry {
            EvasimGeometry::Perpendicular => PumpGeometry::PerpendicularPlaneWave,
            EvasimGeometry::Copropagating => PumpGeometry::CoPropagatingEvanescent,
        };
        Ok(())
    })
}

/// Checks the configuration without running it.
///
/// # Safety
/// `config` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn evasim_config_validate(config: *const EvasimConfig) -> EvasimStatus {
    guard(|| {
        config_ref(config)?.file.resolve()?;
        Ok(())
    })
}

/// Computes the reflectivity spectrum over the configured sweep.
/// `threads` = 0 lets the pool decide.
///
/// # Safety
/// `config` must be a live handle and `out` valid for one handle.
#[no_mangle]
pub unsafe extern "C" fn evasim_sweep(
    config: *const EvasimConfig,
    pump: EvasimPump,
    threads: usize,
    out: *mut *mut EvasimSpectrum,
) -> EvasimStatus {
    guard(|| {
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = ptr::null_mut();
        let experiment = config_ref(config)?.file.resolve()?;
        let selection = match pump {
            EvasimPump::Off => PumpSelection::Off,
            EvasimPump::On => PumpSelection::On,
            EvasimPump::Both => PumpSelection::Both,
        };
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Failure(EvasimStatus::InvalidInput, format!("thread pool: {e}")))?;
        let grid = experiment.sweep.grid()?;
        let spectrum = pool.install(|| sweep_selected(&experiment, &grid, selection))?;
        *out = Box::into_raw(Box::new(EvasimSpectrum { config: experiment, spectrum }));
        Ok(())
    })
}

/// # Safety
/// `spectrum` must be NULL or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn evasim_spectrum_free(spectrum: *mut EvasimSpectrum) {
    if !spectrum.is_null() {
        drop(Box::from_raw(spectrum));
    }
}

/// Number of rows; 0 for NULL.
///
/// # Safety
/// `spectrum` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn evasim_spectrum_len(spectrum: *const EvasimSpectrum) -> usize {
    spectrum.as_ref().map_or(0, |s| s.spectrum.records.len())
}

/// Copies row `index` into `out`.
///
/// # Safety
/// `spectrum` must be a live handle and `out` valid for one record.
#[no_mangle]
pub unsafe extern "C" fn evasim_spectrum_record(
    spectrum: *const EvasimSpectrum,
    index: usize,
    out: *mut EvasimRecord,
) -> EvasimStatus {
    guard(|| {
        let s = spectrum_ref(spectrum)?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let n = s.spectrum.records.len();
        let r = s
            .spectrum
            .records
            .get(index)
            .ok_or_else(|| Failure(EvasimStatus::OutOfRange, format!("index {index} out of range for {n} rows")))?;
        *out = EvasimRecord {
            detuning_hz: rad_to_hz(r.detuning_probe),
            r_pump_off: r.r_pump_off,
            r_pump_on: r.r_pump_on,
            chi_off_re: r.chi_off.re,
            chi_off_im: r.chi_off.im,
            chi_on_re: r.chi_on.re,
            chi_on_im: r.chi_on.im,
        };
        Ok(())
    })
}

/// Depth, suppression and width of one line of a two-sided spectrum.
///
/// # Safety
/// `spectrum` must be a live handle and `out` valid for one value.
#[no_mangle]
pub unsafe extern "C" fn evasim_spectrum_dip_metrics(
    spectrum: *const EvasimSpectrum,
    line: EvasimLine,
    out: *mut EvasimDipMetrics,
) -> EvasimStatus {
    guard(|| {
        let s = spectrum_ref(spectrum)?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let (unpumped, pumped) = line_windows(&s.config.vapor, &s.spectrum.detunings());
        let window = match line {
            EvasimLine::Unpumped => unpumped,
            EvasimLine::Pumped => pumped,
        };
        let m = dip_metrics(&s.spectrum.records, &s.spectrum.records, window)?;
        *out = EvasimDipMetrics {
            line_center_hz: rad_to_hz(m.line_center),
            depth_off: m.depth_off,
            depth_on: m.depth_on,
            suppression_ratio: m.suppression_ratio,
            fwhm_off_hz: rad_to_hz(m.fwhm_off),
        };
        Ok(())
    })
}
