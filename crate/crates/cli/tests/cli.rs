use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const DISK: &str = r#"dimension = 2

[ball]
center = [0.0, 0.0]
radius = 10.0

[[bodies]]
kind = "ball"
center = [0.0, 0.0]
semiaxes = [1.0]

[metadata]
name = "unit disk"
seed = 4
"#;

fn scatterlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_scatterlab")).args(args).output().expect("binary runs")
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn validate_accepts_a_valid_scene() {
    let dir = TempDir::new().unwrap();
    let scene = write(&dir, "disk.toml", DISK);
    let o = scatterlab(&["validate", s(&scene)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "OK");
}

#[test]
fn validate_reports_overlap_with_exit_one() {
    let dir = TempDir::new().unwrap();
    let text = DISK.to_string() + "\n[[bodies]]\nkind = \"ball\"\ncenter = [0.5, 0.0]\nsemiaxes = [1.0]\n";
    // Appended after [metadata]; move the table so the document stays valid TOML.
    let text = text.replace("[metadata]\nname = \"unit disk\"\nseed = 4\n", "") + "[metadata]\nseed = 4\n";
    let scene = write(&dir, "overlap.toml", &text);
    let o = scatterlab(&["validate", s(&scene)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("0 and 1"));
}

#[test]
fn missing_file_is_an_io_error() {
    let o = scatterlab(&["validate", "/nonexistent/scene.toml"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn unknown_key_is_rejected() {
    let dir = TempDir::new().unwrap();
    let scene = write(&dir, "bad.toml", &DISK.replace("radius = 10.0", "radius = 10.0\ncolour = 1"));
    assert_eq!(scatterlab(&["validate", s(&scene)]).status.code(), Some(1));
}

#[test]
fn sls_row_count_and_header() {
    let dir = TempDir::new().unwrap();
    let scene = write(&dir, "disk.toml", DISK);
    let out = dir.path().join("sls.csv");
    let o = scatterlab(&["sls", s(&scene), "--omega", "1,0", "--grid", "512", "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "omega_1,omega_2,impact_1,theta_1,theta_2,T,reflections,grazing,itinerary");
    let rows = lines.count();
    assert!(rows > 0 && rows <= 512, "{rows}");
}

#[test]
fn compare_identical_files() {
    let dir = TempDir::new().unwrap();
    let scene = write(&dir, "disk.toml", DISK);
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for out in [&a, &b] {
        let o = scatterlab(&["travel", s(&scene), "--points", "8", "--out", s(out)]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let o = scatterlab(&["compare", s(&a), s(&b), "--tol", "1e-6"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("verdict indistinguishable"), "{text}");
    assert!(text.contains("matched_fraction 1"), "{text}");
}

#[test]
fn compare_rejects_different_grids() {
    let dir = TempDir::new().unwrap();
    let scene = write(&dir, "disk.toml", DISK);
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    scatterlab(&["sls", s(&scene), "--omega", "1,0", "--grid", "16", "--out", s(&a)]);
    scatterlab(&["sls", s(&scene), "--omega", "1,0", "--grid", "32", "--out", s(&b)]);
    assert_eq!(scatterlab(&["compare", s(&a), s(&b), "--tol", "1e-6"]).status.code(), Some(1));
}

#[test]
fn randomized_commands_need_a_seed() {
    let dir = TempDir::new().unwrap();
    let scene = write(&dir, "noseed.toml", &DISK.replace("seed = 4\n", ""));
    let o = scatterlab(&["coverage", s(&scene), "--rays", "10"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("metadata.seed"));
}

#[test]
fn coverage_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let scene = write(&dir, "disk.toml", DISK);
    let run = || stdout(&scatterlab(&["coverage", s(&scene), "--rays", "2000", "--epsilon", "0.1"]));
    let first = run();
    assert!(first.starts_with("obstacle,arc,tags,samples,covered,coverage\n0,,,720,"), "{first}");
    assert_eq!(first, run());
}

#[test]
fn probe_counts_self_comparison() {
    let dir = TempDir::new().unwrap();
    let scene = write(&dir, "disk.toml", DISK);
    let o = scatterlab(&["probe-counts", s(&scene), s(&scene), "--probes", "300"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("equal_fraction 1"));
}

#[test]
fn trace_writes_events() {
    let dir = TempDir::new().unwrap();
    let scene = write(&dir, "disk.toml", DISK);
    let o = scatterlab(&["trace", s(&scene), "--point", "-10,0", "--direction", "1,0"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows[0], "event,obstacle,arc,p_1,p_2,v_1,v_2,length");
    assert!(rows[2].starts_with("reflection,0,,-1.0000000000000000e0,"), "{}", rows[2]);
    assert!(rows[3].starts_with("escaped,"));
}

#[test]
fn precision_override() {
    let dir = TempDir::new().unwrap();
    let scene = write(&dir, "disk.toml", DISK);
    let o = Command::new(env!("CARGO_BIN_EXE_scatterlab"))
        .args(["trace", s(&scene), "--point", "-10,0", "--direction", "1,0"])
        .env("SCATTERLAB_PRECISION", "4")
        .env("SCATTERLAB_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("reflection,0,,-1.000e0,0.000e0,"), "{}", stdout(&o));
}

#[test]
fn reconstruct_recovers_the_disk() {
    let dir = TempDir::new().unwrap();
    let scene = write(&dir, "disk.toml", DISK);
    let o = scatterlab(&["reconstruct", s(&scene), "--points", "12"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut rows = text.lines();
    assert_eq!(rows.next().unwrap(), "p_1,p_2,source_x_1,source_x_2,source_y_1,source_y_2,t");
    let mut n = 0;
    for row in rows {
        let v: Vec<f64> = row.split(',').map(|x| x.parse().unwrap()).collect();
        assert!((v[0].hypot(v[1]) - 1.0).abs() < 1e-6);
        n += 1;
    }
    assert!(n > 50);
}

#[test]
fn livshits_demo_rejects_wide_aperture() {
    let o = scatterlab(&["demo-livshits", "--aperture", "1.5", "--rays", "10"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("foci outside aperture"));
}

#[test]
fn livshits_demo_small_run() {
    let dir = TempDir::new().unwrap();
    let o = scatterlab(&[
        "demo-livshits",
        "--rays",
        "2000",
        "--grid-points",
        "6",
        "--out-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(text.contains("hidden_hits pocket=0 flat=0"), "{text}");
    assert!(text.contains("verdict indistinguishable"), "{text}");
    assert_eq!(
        std::fs::read(dir.path().join("pocket.csv")).unwrap(),
        std::fs::read(dir.path().join("flat.csv")).unwrap()
    );
}
