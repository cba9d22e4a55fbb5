use std::fs;
use std::path::Path;

use bnls_core::evolution::SimConfig;
use bnls_core::harness::{
    analyze_directory, collect_summaries, parse_config, run_experiment, summary_table, ExperimentPreset,
    BLOWUP_FIT_FILE, CHECKS_FILE, CONFIG_FILE, GAP, LIMIT_FILE, REGRIDS_FILE, SERIES_FILE, SHRINK_FIT_FILE,
    SNAPSHOT_DIR, SUMMARY_FILE,
};

/// Standing ring on a coarse grid, focused about a hundredfold in seconds.
fn small_collapse() -> ExperimentPreset {
    let mut c = SimConfig::ring(2, 4.0, 2.0, 5.0);
    c.grid.nodes = 1024;
    c.regrid.min_points_in_core = 60;
    c.stopping.l_min = 2.5e-3;
    ExperimentPreset::custom("small-standing", c).unwrap()
}

fn cells(line: &str) -> Vec<&str> {
    line.split("  ").map(str::trim).filter(|c| !c.is_empty()).collect()
}

#[test]
fn completed_run_writes_artifacts_and_one_full_row() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    let report = run_experiment(&small_collapse(), &out).unwrap();
    assert_eq!(report.exit_code(), 0);
    for f in [CONFIG_FILE, SERIES_FILE, REGRIDS_FILE, SUMMARY_FILE, CHECKS_FILE, BLOWUP_FIT_FILE, SHRINK_FIT_FILE, LIMIT_FILE] {
        assert!(out.join(f).is_file(), "missing {f}");
    }
    assert!(fs::read_dir(out.join(SNAPSHOT_DIR)).unwrap().count() > 0);
    let fit = fs::read_to_string(out.join(BLOWUP_FIT_FILE)).unwrap();
    assert!(fit.contains("exponent:") && fit.contains("window"), "{fit}");

    let rows = collect_summaries(dir.path()).unwrap();
    assert_eq!(rows.len(), 1);
    let table = summary_table(&rows);
    let lines: Vec<&str> = table.lines().collect();
    assert_eq!(lines.len(), 2, "{table}");
    let row = cells(lines[1]);
    assert!(row.iter().all(|c| *c != GAP), "{table}");
    assert_eq!(row.len(), cells(lines[0]).len(), "{table}");
}

fn series_bytes(dir: &Path) -> Vec<u8> {
    fs::read(dir.join(SERIES_FILE)).unwrap()
}

#[test]
fn config_echo_reproduces_the_run() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    let first = run_experiment(&small_collapse(), &a).unwrap();
    let echoed = parse_config(&fs::read_to_string(a.join(CONFIG_FILE)).unwrap()).unwrap();
    run_experiment(&ExperimentPreset::custom("echo", echoed).unwrap(), &b).unwrap();
    assert_eq!(series_bytes(&a), series_bytes(&b));

    // Re-analysis from the artifacts gives the same fits.
    let again = analyze_directory(&a).unwrap();
    assert_eq!(again.p, first.summary.p);
    assert_eq!(again.alpha, first.summary.alpha);
}

#[test]
fn interrupted_run_is_flagged_without_fits() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("cut");
    run_experiment(&small_collapse(), &out).unwrap();
    fs::remove_file(out.join(SUMMARY_FILE)).unwrap();
    let rows = collect_summaries(dir.path()).unwrap();
    assert_eq!(rows.len(), 1);
    assert!(!rows[0].completed);
    let table = summary_table(&rows);
    let line = table.lines().nth(1).unwrap();
    assert!(line.contains("[incomplete]"), "{table}");
    let header = cells(table.lines().next().unwrap());
    let row = cells(line);
    for col in ["alpha", "p", "tail"] {
        let k = header.iter().position(|h| *h == col).unwrap();
        assert_eq!(row[k], GAP, "{col} in {table}");
    }
}

#[test]
fn subcritical_run_reports_global_existence_without_fits() {
    let mut c = SimConfig::ring(2, 1.0, 0.5, 5.0);
    c.grid.nodes = 512;
    c.stopping.stagnation_steps = 400;
    c.stopping.max_steps = 20_000;
    let dir = tempfile::tempdir().unwrap();
    let report = run_experiment(&ExperimentPreset::custom("subcritical", c).unwrap(), dir.path()).unwrap();
    assert_eq!(report.summary.status, "global existence");
    assert_eq!(report.exit_code(), 0);
    for f in [BLOWUP_FIT_FILE, SHRINK_FIT_FILE, LIMIT_FILE] {
        assert!(!dir.path().join(f).exists(), "unexpected {f}");
    }
    assert!(report.summary.p.is_none() && report.summary.alpha.is_none());
}
