//! End-to-end runs of the `optoring` binary.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_optoring"))
        .arg("--out")
        .arg(out)
        .args(args)
        .env_remove("OPTORING_OUT")
        .output()
        .expect("binary runs")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn manifest(dir: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(dir.join("manifest.json")).unwrap()).unwrap()
}

const SMALL: &[&str] = &["--sub", "spectrum", "--spectrum.points", "301"];

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(dir.path(), SMALL).status.code(), Some(0));
    let csv1 = std::fs::read(dir.path().join("spectrum.csv")).unwrap();
    let mut m1 = manifest(dir.path());
    assert_eq!(run(dir.path(), SMALL).status.code(), Some(0));
    let csv2 = std::fs::read(dir.path().join("spectrum.csv")).unwrap();
    let mut m2 = manifest(dir.path());
    assert_eq!(csv1, csv2);
    m1.as_object_mut().unwrap().remove("timestamp");
    m2.as_object_mut().unwrap().remove("timestamp");
    assert_eq!(m1, m2);
}

#[test]
fn spectrum_header_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(dir.path(), SMALL).status.code(), Some(0));
    let text = std::fs::read_to_string(dir.path().join("spectrum.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("omega_over_omega_m,rho0,rho,r2_linear,r2_nonlinear"));
    assert_eq!(lines.count(), 301);
    let m = manifest(dir.path());
    let d = &m["derived"];
    let gc = 1.5f64.sqrt() / 2.0;
    assert!((d["lambda"].as_f64().unwrap() - 0.52 / gc).abs() < 1e-12);
    // G_+ was derived from the (e) resonance, so its residual vanishes
    assert!(d["residuals"]["e"].as_f64().unwrap().abs() < 1e-10);
    for p in ["a", "b", "c", "d"] {
        assert!(d["residuals"].get(p).is_some());
    }
    assert_eq!(m["config"]["params.delta_over_omega_m"], "-1.5");
    assert!(m["timestamp"].is_u64());
}

#[test]
fn config_file_then_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "[params]\ndelta_over_omega_m = -2.0  # file\ng_minus_over_omega_m = 0.6\n[spectrum]\npoints = 11\n").unwrap();
    let o = run(dir.path(), &["--config", cfg.to_str().unwrap(), "--params.g-minus-over-omega-m", "0.65"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let m = manifest(dir.path());
    assert_eq!(m["config"]["params.delta_over_omega_m"], "-2.0");
    assert_eq!(m["config"]["params.g_minus_over_omega_m"], "0.65");
    assert_eq!(m["config"]["spectrum.points"], "11");
}

#[test]
fn env_overrides_out() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_optoring"))
        .args(["--out", a.path().to_str().unwrap(), "--spectrum.points", "5"])
        .env("OPTORING_OUT", b.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(b.path().join("spectrum.csv").exists());
    assert!(!a.path().join("spectrum.csv").exists());
}

#[test]
fn invalid_config_exits_2_naming_the_field() {
    let dir = tempfile::tempdir().unwrap();
    for (args, field) in [
        (vec!["--spectrum.points", "1"], "spectrum.points"),
        (vec!["--sub", "map", "--map.plus-min", "0.5", "--map.plus-max", "0.5"], "map.plus_min"),
        (vec!["--sub", "linecut", "--linecut.points", "0"], "linecut.points"),
        (vec!["--params.kappa-over-omega-m", "-0.1"], "params.kappa_over_omega_m"),
        (vec!["--params.bogus", "1"], "params.bogus"),
        (vec!["--processes", "a,q"], "run.processes"),
    ] {
        let o = run(dir.path(), &args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stderr(&o));
        assert!(stderr(&o).contains(field), "{args:?}: {}", stderr(&o));
    }
}

#[test]
fn unstable_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["--params.g-minus-over-omega-m", "0.7", "--params.g-plus-over-omega-m", "0.2"]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
    let o = run(dir.path(), &["--sub", "map", "--map.plus-min", "1.0", "--map.plus-max", "1.4", "--map.n-plus", "2", "--map.n-minus", "2", "--map.omega-points", "11"]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
}

#[test]
fn unwritable_output_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    std::fs::write(&blocker, "").unwrap();
    let o = run(&blocker.join("sub"), &["--spectrum.points", "5"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("file"));
}

#[test]
fn device_json_fields() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(dir.path(), &["--sub", "device"]).status.code(), Some(0));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("device.json")).unwrap()).unwrap();
    for k in ["k1L", "k2L", "q1_over_L", "q2_over_L", "g11", "g12", "ratio_gminus_gplus"] {
        assert!(v[k].is_f64(), "{k}");
    }
    let ratio = v["ratio_gminus_gplus"].as_f64().unwrap();
    assert!(ratio > 1.0 && ratio < 1.3, "{ratio}");
}

#[test]
fn small_map_and_linecut() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["--sub", "map", "--map.n-plus", "4", "--map.n-minus", "3", "--map.omega-points", "201", "--plot"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let map = std::fs::read_to_string(dir.path().join("map.csv")).unwrap();
    assert_eq!(map.lines().count(), 1 + 12);
    assert!(dir.path().join("atlas.csv").exists() && dir.path().join("plot.py").exists());

    let o = run(dir.path(), &["--sub", "linecut", "--linecut.points", "21", "--linecut.omega-points", "401", "--processes", "e"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let m = manifest(dir.path());
    assert_eq!(m["processes"], serde_json::json!(["e"]));
    let e = m["derived"]["crossings_g_minus_over_gcri"]["e"].as_array().unwrap();
    assert_eq!(e.len(), 1);
    assert!((e[0].as_f64().unwrap() - 0.951).abs() < 0.01);
}

#[test]
fn modes_table() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(dir.path(), &["--sub", "modes", "--modes.n-cells", "10"]).status.code(), Some(0));
    let t = std::fs::read_to_string(dir.path().join("modes.csv")).unwrap();
    assert!(t.starts_with("j,k_over_pi,g_k,omega_minus,omega_plus"));
    assert!(t.lines().count() > 2);
}
