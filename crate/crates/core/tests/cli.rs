//! End-to-end runs of the `surface-beta` binary.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use num_complex::Complex64;
use surface_beta::beta::oracle::sphere2;
use tempfile::TempDir;

const SPHERE: &str = "[surface]\nkind = \"sphere\"\nradius = 1.0\n";
const SPHERE_2: &str = "[surface]\nkind = \"sphere\"\nradius = 2.0\n";
const TORUS: &str = "[surface]\nkind = \"torus\"\nmajor = 2.0\nminor = 1.0\n";

struct Workspace {
    dir: TempDir,
}

impl Workspace {
    fn new() -> Self {
        Self { dir: tempfile::tempdir().expect("temporary directory") }
    }

    fn file(&self, name: &str, contents: &str) -> PathBuf {
        let path = self.dir.path().join(name);
        std::fs::write(&path, contents).expect("write spec");
        path
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_surface-beta")).args(args).output().expect("spawn surface-beta")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn arg(p: &Path) -> &str {
    p.to_str().expect("utf-8 path")
}

/// Value column of the first table row whose quantity starts with `prefix`.
fn row_value(report: &str, prefix: &str) -> f64 {
    let line =
        report.lines().find(|l| l.starts_with(prefix)).unwrap_or_else(|| panic!("no row '{prefix}' in\n{report}"));
    let rest = &line[prefix.len()..];
    // quantities may contain spaces; the value is the second-to-last field
    let fields: Vec<&str> = rest.split_whitespace().collect();
    fields[fields.len() - 2].parse().unwrap_or_else(|_| panic!("bad value in '{line}'"))
}

struct CsvRow {
    s: f64,
    value: Option<f64>,
    mode: String,
    pole: bool,
}

fn read_csv(path: &Path) -> Vec<CsvRow> {
    let text = std::fs::read_to_string(path).expect("csv written");
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("re_s,im_s,re_value,im_value,error_estimate,mode,pole_flag"));
    lines
        .map(|l| {
            assert!(!l.contains("NaN") && !l.contains("inf"), "non-finite field in '{l}'");
            let f: Vec<&str> = l.split(',').collect();
            assert_eq!(f.len(), 7, "{l}");
            CsvRow {
                s: f[0].parse().unwrap(),
                value: (!f[2].is_empty()).then(|| f[2].parse().unwrap()),
                mode: f[5].to_string(),
                pole: f[6] == "1",
            }
        })
        .collect()
}

#[test]
fn eval_sphere_point_at_minus_three() {
    let ws = Workspace::new();
    let spec = ws.file("s.toml", SPHERE);
    let out = run(&["eval", "--surface", arg(&spec), "--s", "-3", "--point", "1.1,0.4"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let report = stdout(&out);
    assert!(report.contains("mode           continued"), "{report}");
    let v = row_value(&report, "B^u(-3)");
    assert!((v + PI).abs() < 1e-7, "{v}");
}

#[test]
fn eval_sphere_global_at_zero() {
    let ws = Workspace::new();
    let spec = ws.file("s.toml", SPHERE);
    let out = run(&["eval", "--surface", arg(&spec), "--s", "0"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let v = row_value(&stdout(&out), "B_M(0)");
    assert!((v - 16.0 * PI * PI).abs() < 1e-6 * 16.0 * PI * PI, "{v}");
}

#[test]
fn exit_codes_follow_the_failure_class() {
    let ws = Workspace::new();
    let spec = ws.file("s.toml", SPHERE);
    let p = arg(&spec);

    let bad_key = ws.file("bad.toml", "[surface]\nkind = \"sphere\"\nradius = 1.0\nradus = 2.0\n");
    let out = run(&["eval", "--surface", arg(&bad_key), "--s", "-1"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("'radus'"), "{}", stderr(&out));

    let out = run(&["eval", "--surface", arg(&ws.path("missing.toml")), "--s", "-1"]);
    assert_eq!(code(&out), 2);

    let out = run(&["eval", "--surface", p, "--s", "minus one"]);
    assert_eq!(code(&out), 2);

    let out = run(&["eval", "--surface", p, "--s", "-2.5", "--point", "1.1,0.4", "--mode", "direct"]);
    assert_eq!(code(&out), 3, "{}", stderr(&out));

    let out = run(&["eval", "--surface", p, "--s", "-4.0005", "--point", "1.1,0.4"]);
    assert_eq!(code(&out), 4, "{}", stderr(&out));
    assert!(stderr(&out).contains("pole"));
}

#[test]
fn sweep_on_the_sphere_tracks_the_closed_form() {
    let ws = Workspace::new();
    let spec = ws.file("s.toml", SPHERE);
    let csv = ws.path("sweep.csv");
    let out = run(&[
        "sweep",
        "--surface",
        arg(&spec),
        "--from",
        "-1.5",
        "--to",
        "0",
        "--steps",
        "16",
        "--point",
        "1.1,0.4",
        "--out",
        arg(&csv),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let rows = read_csv(&csv);
    assert_eq!(rows.len(), 16);
    for r in &rows {
        let want = sphere2(1.0, Complex64::new(r.s, 0.0)).unwrap().0.re;
        let got = r.value.expect("value present");
        assert!((got - want).abs() < 1e-5 * want.abs(), "s = {}: {got} vs {want}", r.s);
        assert!(!r.pole);
    }
}

#[test]
fn sweep_through_a_pole_flags_it() {
    let ws = Workspace::new();
    let spec = ws.file("s.toml", SPHERE);
    let csv = ws.path("pole.csv");
    let out = run(&[
        "sweep",
        "--surface",
        arg(&spec),
        "--from",
        "-2.5",
        "--to",
        "-1.5",
        "--steps",
        "11",
        "--point",
        "1.1,0.4",
        "--out",
        arg(&csv),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let rows = read_csv(&csv);
    assert_eq!(rows.len(), 11);
    let poles: Vec<&CsvRow> = rows.iter().filter(|r| r.pole).collect();
    assert_eq!(poles.len(), 1);
    assert!((poles[0].s + 2.0).abs() < 1e-12 && poles[0].value.is_none() && poles[0].mode == "pole");
    for r in rows.iter().filter(|r| !r.pole) {
        let want = sphere2(1.0, Complex64::new(r.s, 0.0)).unwrap().0.re;
        assert!((r.value.unwrap() - want).abs() < 1e-5 * want.abs(), "s = {}", r.s);
    }
}

#[test]
fn torus_sweep_across_minus_three_is_smooth() {
    let ws = Workspace::new();
    let spec = ws.file("t.toml", TORUS);
    let csv = ws.path("torus.csv");
    let out = run(&[
        "sweep",
        "--surface",
        arg(&spec),
        "--from",
        "-3.5",
        "--to",
        "-2.5",
        "--steps",
        "11",
        "--point",
        "0,0",
        "--out",
        arg(&csv),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let values: Vec<f64> = read_csv(&csv).iter().map(|r| r.value.expect("no pole on this segment")).collect();
    // the genuine pole at -2 makes the values fall steadily; a pole at -3
    // would instead blow up with opposite signs on either side of it
    assert!(values.windows(2).all(|w| w[1] < w[0]), "{values:?}");
    let (left, mid, right) = (values[4], values[5], values[6]);
    assert!(left.signum() == mid.signum() && mid.signum() == right.signum(), "{values:?}");
    assert!(left.abs() < 2.0 * mid.abs() && right.abs() < 2.0 * mid.abs(), "{values:?}");
}

#[test]
fn mobius_energy_of_spheres() {
    let ws = Workspace::new();
    for (name, text) in [("one.toml", SPHERE), ("two.toml", SPHERE_2)] {
        let spec = ws.file(name, text);
        let out = run(&["mobius", "--surface", arg(&spec), "--tol", "1e-4"]);
        assert_eq!(code(&out), 0, "{}", stderr(&out));
        let v = row_value(&stdout(&out), "renormalised Moebius energy");
        assert!((v + PI * PI).abs() < 1e-3 * PI * PI, "{name}: {v}");
    }
}

#[test]
fn single_thread_runs_are_bit_identical() {
    let ws = Workspace::new();
    let spec = ws.file("t.toml", TORUS);
    let args = ["--threads", "1", "eval", "--surface", arg(&spec), "--s", "-1.5", "--level", "1"];
    let strip = |o: &Output| stdout(o).lines().filter(|l| !l.starts_with("time:")).collect::<Vec<_>>().join("\n");
    let (a, b) = (run(&args), run(&args));
    assert_eq!(code(&a), 0, "{}", stderr(&a));
    assert_eq!(strip(&a), strip(&b));
}

#[test]
fn verify_subset_passes() {
    let out = run(&["verify", "--only", "2,7,10,15"]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    let report = stdout(&out);
    assert_eq!(report.lines().filter(|l| l.contains("PASS")).count(), 4, "{report}");
}
