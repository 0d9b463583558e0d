use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn dplab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dplab")).args(args).output().expect("binary runs")
}

fn run(kind: &str, config: &Path, out: &Path) -> Output {
    dplab(&[kind, "--config", config.to_str().unwrap(), "--out", out.to_str().unwrap()])
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

const SMALL_SOLVE: &str = r#"
kind = "solve"
exploratory = true

[domain]
shape = { kind = "unit_disk" }
h = 0.125
refine = 1

[spec]
p = 2.0
q = 3.0

[data]
boundary = { kind = "saddle", scale = 1.0 }
exact = { kind = "saddle", scale = 1.0 }

[tolerances]
linf = 1e-1
"#;

#[test]
fn passing_run_exits_zero_and_writes_reports() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("solve.toml");
    fs::write(&cfg, SMALL_SOLVE).unwrap();
    let out = tmp.path().join("out");
    let o = run("solve", &cfg, &out);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("PASS level1/linf_error"));
    for f in ["solve.csv", "summary.json", "manifest.json", "plotdata.csv"] {
        assert!(out.join(f).is_file(), "missing {f}");
    }
    let csv = fs::read_to_string(out.join("solve.csv")).unwrap();
    let header: Vec<&str> = csv.lines().next().unwrap().split(',').collect();
    assert!(header.contains(&"linf_error"));
    assert_eq!(csv.lines().count(), 3);
    let leftovers: Vec<_> = fs::read_dir(&out)
        .unwrap()
        .filter_map(|e| e.ok())
        .filter(|e| e.file_name().to_string_lossy().ends_with(".tmp"))
        .collect();
    assert!(leftovers.is_empty());
}

#[test]
fn failing_check_exits_one() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("solve.toml");
    fs::write(&cfg, SMALL_SOLVE.replace("linf = 1e-1", "linf = 1e-12")).unwrap();
    let o = run("solve", &cfg, &tmp.path().join("out"));
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL level0/linf_error"));
    let summary: serde_json::Value =
        serde_json::from_slice(&fs::read(tmp.path().join("out/summary.json")).unwrap()).unwrap();
    assert_eq!(summary["passed"], false);
}

#[test]
fn balance_violation_is_a_config_error() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("bad.toml");
    let text = SMALL_SOLVE.replace("exploratory = true", "exploratory = false").replace(
        "p = 2.0\nq = 3.0",
        "p = 1.2\nq = 1.9\nweight = { kind = \"half_plane_power\", scale = 1.0, alpha = 0.5 }",
    );
    fs::write(&cfg, text).unwrap();
    let o = run("solve", &cfg, &tmp.path().join("out"));
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("q/p <= 1 + alpha/n"), "{}", stderr(&o));
    assert!(!tmp.path().join("out/solve.csv").exists());
}

#[test]
fn strict_flag_overrides_exploratory() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("solve.toml");
    fs::write(&cfg, SMALL_SOLVE).unwrap();
    let out = tmp.path().join("out");
    let o = dplab(&["solve", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap(), "--strict-pq"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(dplab(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(dplab(&["solve"]).status.code(), Some(2));
    let tmp = tempfile::tempdir().unwrap();
    let missing = tmp.path().join("nope.toml");
    assert_eq!(run("solve", &missing, &tmp.path().join("out")).status.code(), Some(2));
    let cfg = tmp.path().join("solve.toml");
    fs::write(&cfg, SMALL_SOLVE).unwrap();
    assert_eq!(run("capacity", &cfg, &tmp.path().join("out")).status.code(), Some(2));
    fs::write(&cfg, format!("{SMALL_SOLVE}\nbogus = 1\n")).unwrap();
    assert_eq!(run("solve", &cfg, &tmp.path().join("out")).status.code(), Some(2));
}

#[test]
fn plotdata_on_empty_directory_is_a_usage_error() {
    let tmp = tempfile::tempdir().unwrap();
    let o = dplab(&["plotdata", tmp.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let o = dplab(&["plotdata", tmp.path().join("absent").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn plotdata_rebuilds_from_reports() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("out");
    assert_eq!(run("hausdorff", &configs().join("hausdorff_point.toml"), &out).status.code(), Some(0));
    let before = fs::read(out.join("plotdata.csv")).unwrap();
    fs::remove_file(out.join("plotdata.csv")).unwrap();
    assert_eq!(dplab(&["plotdata", out.to_str().unwrap()]).status.code(), Some(0));
    assert_eq!(fs::read(out.join("plotdata.csv")).unwrap(), before);
}

#[test]
fn hausdorff_point_columns_and_slope() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("out");
    let o = run("hausdorff", &configs().join("hausdorff_point.toml"), &out);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let mut rdr = csv::Reader::from_path(out.join("hausdorff.csv")).unwrap();
    assert_eq!(rdr.headers().unwrap().iter().collect::<Vec<_>>(), ["delta", "value", "slope"]);
    let rows: Vec<csv::StringRecord> = rdr.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 5);
    assert_eq!(&rows[0][2], "");
    for r in &rows[1..] {
        let s: f64 = r[2].parse().unwrap();
        assert!((s - 2.0 / 3.0).abs() < 0.1, "slope {s}");
    }
}

#[test]
fn runs_are_byte_identical() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = configs().join("obstacle.toml");
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    assert_eq!(run("obstacle", &cfg, &a).status.code(), Some(0));
    assert_eq!(run("obstacle", &cfg, &b).status.code(), Some(0));
    for f in ["obstacle.csv", "plotdata.csv", "summary.json"] {
        assert_eq!(fs::read(a.join(f)).unwrap(), fs::read(b.join(f)).unwrap(), "{f} differs");
    }
}

#[test]
fn manifest_reproduces_the_run() {
    let tmp = tempfile::tempdir().unwrap();
    let first = tmp.path().join("first");
    assert_eq!(run("hausdorff", &configs().join("hausdorff_segment.toml"), &first).status.code(), Some(0));
    let manifest: serde_json::Value = serde_json::from_slice(&fs::read(first.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["kind"], "hausdorff");
    assert!(manifest["outputs"].as_array().unwrap().iter().any(|f| f == "hausdorff.csv"));
    let second = tmp.path().join("second");
    let o = run("hausdorff", &first.join("manifest.json"), &second);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(fs::read(first.join("hausdorff.csv")).unwrap(), fs::read(second.join("hausdorff.csv")).unwrap());
}
