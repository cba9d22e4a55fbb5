use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn bnls(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bnls"))
        .args(args)
        .env("RUST_LOG", "warn")
        .output()
        .expect("bnls starts")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

const SMALL_RUN: &str = "\
[physics]
d = 2
sigma = 4
A = 2
r_c = 5

[grid]
nodes = 1024

[regrid]
min_points_in_core = 60

[stopping]
l_min = 2.5e-3
";

#[test]
fn lists_presets() {
    let o = bnls(&["presets"]);
    assert!(o.status.success());
    let text = stdout(&o);
    for name in ["standing-ring-d2", "shrinking-ring-d2", "critical-ring-d2", "below-critical-power"] {
        assert!(text.contains(name), "{text}");
    }
}

#[test]
fn writes_a_ground_state() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("gs.txt");
    let o = bnls(&["groundstate", "--sigma", "4", "--out", file.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(&file).unwrap();
    assert!(text.starts_with("# sigma:"));
    let norm: f64 = text
        .lines()
        .find_map(|l| l.strip_prefix("# norm_sq: "))
        .unwrap()
        .trim()
        .parse()
        .unwrap();
    assert!(norm > 0.0);
    assert!(text.lines().filter(|l| !l.starts_with('#')).count() >= 512);
}

#[test]
fn run_analyze_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("small.toml");
    fs::write(&cfg, SMALL_RUN).unwrap();
    let runs = dir.path().join("runs");
    let run_dir = runs.join("small");
    let o = bnls(&[
        "run",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        run_dir.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("status: collapsed"), "{}", stdout(&o));

    let o = bnls(&["analyze", "--out", run_dir.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("p: 0."), "{}", stdout(&o));

    let o = bnls(&["report", "--out", runs.to_str().unwrap()]);
    assert!(o.status.success());
    let table = fs::read_to_string(runs.join("report.txt")).unwrap();
    assert_eq!(table.lines().count(), 2, "{table}");
    assert!(table.lines().nth(1).unwrap().starts_with("small"));
}

#[test]
fn invalid_inputs_exit_with_code_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    fs::write(&cfg, "[physics]\nd = 2\nsigma = 0\nA = 2\nr_c = 5\n").unwrap();
    let o = bnls(&["run", "--config", cfg.to_str().unwrap(), "--out", dir.path().join("x").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("sigma must be positive"));

    let o = bnls(&["run", "--preset", "no-such-preset"]);
    assert_eq!(o.status.code(), Some(2));

    let empty = dir.path().join("empty");
    fs::create_dir(&empty).unwrap();
    let o = bnls(&["report", "--out", empty.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!Path::new(&empty.join("report.txt")).exists());
}
