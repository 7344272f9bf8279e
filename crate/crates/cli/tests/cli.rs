use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_osculate"))
}

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

#[test]
fn tait_kneser_on_spiral_passes() {
    let spiral = data("logspiral.json");
    let o = run(&["verify", "tait_kneser", "--curve", spiral.to_str().unwrap(), "--samples", "100"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["passed"], true);
    assert_eq!(v["report"]["report"]["samples"].as_array().unwrap().len(), 100);
}

#[test]
fn tait_kneser_on_full_ellipse_violates_hypothesis() {
    let e = data("ellipse_full.json");
    let o = run(&["verify", "tait_kneser", "--curve", e.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    let v = json(&o);
    assert_eq!(v["hypothesis_holds"], false);
    assert_eq!(v["exit_code"], 2);
}

#[test]
fn missing_curve_file_is_a_usage_error() {
    let o = run(&["verify", "tait_kneser", "--curve", "/no/such/curve.json"]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("curve.json"));
}

#[test]
fn unknown_names_are_usage_errors() {
    assert_eq!(code(&run(&["verify", "theorem9"])), 1);
    assert_eq!(code(&run(&["scan", "cusps"])), 1);
    assert_eq!(code(&run(&["figure", "fig9"])), 1);
}

#[test]
fn inapplicable_flags_are_usage_errors() {
    assert_eq!(code(&run(&["verify", "conics", "--tol", "1e-3"])), 1);
    assert_eq!(code(&run(&["verify", "moebius", "--resolution", "64"])), 1);
}

#[test]
fn help_exits_cleanly() {
    assert_eq!(code(&run(&["--help"])), 0);
}

#[test]
fn function_specs_drive_taylor_and_moebius() {
    let cube = data("cube_quadratic.json");
    let o = run(&["verify", "taylor_even", "--curve", cube.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let tan = data("tan.json");
    let o = run(&["verify", "moebius", "--curve", tan.to_str().unwrap(), "--samples", "30"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["report"]["schwarzian_sign"], 1.0);
}

#[test]
fn parity_mismatch_is_a_usage_error() {
    let cube = data("cube_quadratic.json");
    let o = run(&["verify", "taylor_odd", "--curve", cube.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
}

#[test]
fn vertex_scan_is_seeded_and_deterministic() {
    let a = run(&["scan", "vertices", "--samples", "12", "--seed", "7"]);
    let b = run(&["scan", "vertices", "--samples", "12", "--seed", "7"]);
    let c = run(&["scan", "vertices", "--samples", "12", "--seed", "8"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("instance,count,even,at_least_4"));
    for line in lines {
        let count: usize = line.split(',').nth(1).unwrap().parse().unwrap();
        assert!(count >= 4 && count.is_multiple_of(2), "{line}");
    }
}

#[test]
fn derivative_zero_scan_matches_order() {
    let o = run(&["scan", "derivative_zeros"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.lines().count(), 9);
    for line in text.lines().skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        assert_eq!(f[1], f[2], "{line}");
    }
}

#[test]
fn schwarzian_scan_flags_rotations() {
    let r = data("rotation.json");
    let o = run(&["scan", "schwarzian_zeros", "--curve", r.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8(o.stdout).unwrap().contains("0,0,true,"));
}

#[test]
fn figure_writes_identical_svg() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.svg");
    let b = dir.path().join("b.svg");
    for p in [&a, &b] {
        let o = run(&["figure", "spiral_circles", "-o", p.to_str().unwrap()]);
        assert_eq!(code(&o), 0);
    }
    let sa = std::fs::read(&a).unwrap();
    assert!(sa.starts_with(b"<?xml"));
    assert_eq!(sa, std::fs::read(&b).unwrap());
}

#[test]
fn figure_defaults_to_preset_name() {
    let dir = tempfile::tempdir().unwrap();
    let o = bin()
        .args(["figure", "ellipse_evolute"])
        .current_dir(dir.path())
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
    assert!(dir.path().join("ellipse_evolute.svg").exists());
}

#[test]
fn verify_reports_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    for theorem in ["taylor_odd", "moebius", "cubic_ovals"] {
        let a = dir.path().join(format!("{theorem}_a.json"));
        let b = dir.path().join(format!("{theorem}_b.json"));
        for p in [&a, &b] {
            let o = run(&["verify", theorem, "--out", p.to_str().unwrap()]);
            assert_eq!(code(&o), 0, "{theorem}");
        }
        assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap(), "{theorem}");
    }
}
