use evasim::config::{validate, ConfigError, ConfigFile};
use evasim::constants::hz_to_rad;
use evasim::model::PumpGeometry;

const DEFAULT_TOML: &str = include_str!("../../../configs/default.toml");

fn violations(text: &str) -> Vec<(String, String)> {
    match validate(text) {
        Err(ConfigError::Invalid(v)) => v.into_iter().map(|x| (x.field, x.message)).collect(),
        other => panic!("expected ConfigInvalid, got {other:?}"),
    }
}

#[test]
fn shipped_default_matches_the_builtin_default() {
    assert_eq!(ConfigFile::parse(DEFAULT_TOML).unwrap(), ConfigFile::default());
    assert_eq!(ConfigFile::parse("").unwrap(), ConfigFile::default());
    let c = validate(DEFAULT_TOML).unwrap();
    assert_eq!(c.sweep.points, 241);
    assert!((c.drive.rabi_pump / (20.0 * c.vapor.gamma3) - 1.0).abs() < 1e-12);
    assert!((c.vapor.gamma4 - hz_to_rad(6.07e6)).abs() < 1e-6);
    let grid = c.sweep.grid().unwrap();
    assert!((grid[120] + 0.5 * c.vapor.hfs_splitting).abs() < 1e-3);
}

#[test]
fn round_trip_through_toml() {
    let mut f = ConfigFile::default();
    f.drive.pump_geometry = PumpGeometry::CoPropagatingEvanescent;
    f.numerics.convergence_threshold = Some(1e-3);
    assert_eq!(ConfigFile::parse(&f.to_toml()).unwrap(), f);
}

#[test]
fn negative_temperature_is_named() {
    let v = violations("[vapor]\ntemperature_k = -5.0\n");
    assert_eq!(v.len(), 1, "{v:?}");
    assert_eq!(v[0].0, "vapor.temperature_k");
}

#[test]
fn odd_order_is_named_with_its_reason() {
    let v = violations("[numerics]\norder_z = 31\n");
    assert_eq!(v.len(), 1, "{v:?}");
    assert_eq!(v[0].0, "numerics.order_z");
    assert!(v[0].1.contains("v_z = 0"), "{}", v[0].1);
}

#[test]
fn every_violation_is_reported() {
    let text = "[vapor]\ntemperature_k = 0.0\ngamma4_hz = -1.0\n[numerics]\norder_x = 3\n[sweep]\npoints = 1\n";
    let fields: Vec<String> = violations(text).into_iter().map(|v| v.0).collect();
    for f in ["vapor.temperature_k", "vapor.gamma4_hz", "numerics.order_x", "sweep.points"] {
        assert!(fields.iter().any(|x| x == f), "{f} missing from {fields:?}");
    }
}

#[test]
fn subcritical_angle_is_reported_on_the_prism() {
    let v = violations("[prism]\ntheta_i_deg = 40.0\n");
    assert_eq!(v[0].0, "prism.theta_i_deg");
    assert!(v[0].1.contains("SubcriticalAngle"), "{}", v[0].1);
}

#[test]
fn descending_power_series_required() {
    let v = violations("[sweep]\npump_power_series_hz = [1e6, 2e6]\n");
    assert_eq!(v[0].0, "sweep.pump_power_series_hz");
}

#[test]
fn parse_errors_carry_a_position() {
    match ConfigFile::parse("[vapor]\ntemperature_k = \"hot\"\n") {
        Err(e @ ConfigError::Parse { line, .. }) => {
            assert_eq!(line, 2);
            assert!(e.to_string().starts_with("ParseError at line 2"), "{e}");
        }
        other => panic!("expected ParseError, got {other:?}"),
    }
    match ConfigFile::parse("[vapor]\n\ntemprature_k = 300.0\n") {
        Err(ConfigError::Parse { line, column, .. }) => assert_eq!((line, column), (3, 1)),
        other => panic!("expected ParseError, got {other:?}"),
    }
}
