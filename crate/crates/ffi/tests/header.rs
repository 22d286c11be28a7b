use std::path::Path;
use std::process::Command;

const PROGRAM: &str = r#"
#include <stdio.h>
#include "evasim.h"

int main(void) {
    EvasimConfig *cfg = NULL;
    if (evasim_config_from_toml("[numerics]\norder_z = 7\n", &cfg) != EVASIM_STATUS_CONFIG_INVALID) return 1;
    if (cfg != NULL) return 2;
    if (evasim_config_default(&cfg) != EVASIM_STATUS_OK) return 3;
    evasim_config_set_orders(cfg, 4, 4);
    evasim_config_set_points(cfg, 9);
    EvasimSpectrum *s = NULL;
    if (evasim_sweep(cfg, EVASIM_PUMP_OFF, 1, &s) != EVASIM_STATUS_OK) {
        fprintf(stderr, "%s\n", evasim_last_error());
        return 4;
    }
    EvasimRecord r;
    for (size_t i = 0; i < evasim_spectrum_len(s); i++) {
        if (evasim_spectrum_record(s, i, &r) != EVASIM_STATUS_OK) return 5;
        if (!(r.r_pump_off > 0.0 && r.r_pump_off <= 1.0)) return 6;
    }
    printf("%s %zu\n", evasim_version(), evasim_spectrum_len(s));
    evasim_spectrum_free(s);
    evasim_config_free(cfg);
    return 0;
}
"#;

fn compiler() -> Option<String> {
    ["cc", "gcc", "clang"]
        .into_iter()
        .find(|c| Command::new(c).arg("--version").output().is_ok_and(|o| o.status.success()))
        .map(str::to_string)
}

#[test]
fn generated_header_declares_the_api() {
    let header = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("include/evasim.h")).unwrap();
    for name in ["evasim_sweep", "evasim_spectrum_record", "evasim_last_error", "EVASIM_STATUS_PANIC", "EvasimRecord"] {
        assert!(header.contains(name), "{name} missing from header");
    }
}

#[test]
fn c_program_links_against_the_shared_library() {
    let Some(cc) = compiler() else {
        eprintln!("no C compiler found; skipping");
        return;
    };
    let include = Path::new(env!("CARGO_MANIFEST_DIR")).join("include");
    // test binaries live in target/<profile>/deps next to the freshly built library
    let deps = std::env::current_exe().unwrap().parent().unwrap().to_path_buf();
    let lib_dir = [deps.clone(), deps.parent().unwrap().to_path_buf()]
        .into_iter()
        .find(|d| d.join("libevasim_ffi.so").exists())
        .unwrap_or_else(|| panic!("no libevasim_ffi.so in or above {}", deps.display()));
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("smoke.c");
    let exe = dir.path().join("smoke");
    std::fs::write(&src, PROGRAM).unwrap();
    let out = Command::new(&cc)
        .args(["-std=c99", "-Wall", "-Werror", "-o"])
        .arg(&exe)
        .arg(&src)
        .arg(format!("-I{}", include.display()))
        .arg(format!("-L{}", lib_dir.display()))
        .arg("-levasim_ffi")
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let run = Command::new(&exe).env("LD_LIBRARY_PATH", &lib_dir).output().unwrap();
    assert!(run.status.success(), "exit {:?}: {}", run.status.code(), String::from_utf8_lossy(&run.stderr));
    assert_eq!(String::from_utf8_lossy(&run.stdout).trim(), format!("{} 9", env!("CARGO_PKG_VERSION")));
}
