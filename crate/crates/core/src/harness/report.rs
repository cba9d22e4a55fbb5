use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use log::warn;

use super::experiment::{ExperimentSummary, CONFIG_FILE, SUMMARY_FILE};
use super::config::parse_config;
use crate::diagnostics::classify_regime;
use crate::error::Result;

/// Marker for values that are missing from the artifacts.
pub const GAP: &str = "-";

/// Summaries of every run directory directly below `dir` (and of `dir`
/// itself when it is a run directory).
///
/// A directory with a configuration echo but no summary yields a partial
/// row: only `σ`, `d` and the regime are filled in.
pub fn collect_summaries(dir: &Path) -> Result<Vec<ExperimentSummary>> {
    let mut dirs = vec![dir.to_path_buf()];
    let mut children: Vec<_> = fs::read_dir(dir)?
        .filter_map(|e| e.ok())
        .map(|e| e.path())
        .filter(|p| p.is_dir())
        .collect();
    children.sort();
    dirs.extend(children);
    let mut out = Vec::new();
    for d in dirs {
        if let Some(s) = read_summary(&d) {
            out.push(s);
        }
    }
    Ok(out)
}

fn read_summary(dir: &Path) -> Option<ExperimentSummary> {
    let name = dir.file_name().map_or("run".into(), |n| n.to_string_lossy().into_owned());
    if let Ok(text) = fs::read_to_string(dir.join(SUMMARY_FILE)) {
        match ExperimentSummary::from_text(&text) {
            Ok(s) => return Some(s),
            Err(e) => warn!("{}: unreadable summary: {e}", dir.display()),
        }
    }
    let cfg = parse_config(&fs::read_to_string(dir.join(CONFIG_FILE)).ok()?).ok()?;
    let (sigma, d) = (cfg.physics.sigma, cfg.physics.d);
    let label = classify_regime(sigma, d).ok();
    Some(ExperimentSummary {
        name,
        sigma,
        d,
        status: "missing summary".into(),
        completed: false,
        regime: label.as_ref().map(|l| l.kind.to_string()),
        alpha_b: label.as_ref().map(|l| l.alpha_b),
        p_pred: label.as_ref().map(|l| l.p_pred),
        ..Default::default()
    })
}

fn cell(v: Option<f64>, prec: usize) -> String {
    v.map_or(GAP.into(), |v| format!("{v:.prec$}"))
}

fn sci(v: Option<f64>) -> String {
    v.map_or(GAP.into(), |v| format!("{v:.2e}"))
}

fn fit_cell(v: Option<f64>, rms: Option<f64>, completed: bool) -> String {
    match (completed, v) {
        (true, Some(v)) => format!("{v:.4} ± {}", rms.map_or(GAP.into(), |r| format!("{r:.1e}"))),
        _ => GAP.into(),
    }
}

/// Plain-text table, one row per run sorted by `α_B` (descending, rows
/// without a regime last). Runs that did not complete are flagged and show
/// no fit values.
pub fn summary_table(rows: &[ExperimentSummary]) -> String {
    let mut rows: Vec<&ExperimentSummary> = rows.iter().collect();
    rows.sort_by(|a, b| {
        let key = |s: &ExperimentSummary| s.alpha_b.unwrap_or(f64::NEG_INFINITY);
        key(b).total_cmp(&key(a)).then(a.d.cmp(&b.d)).then(a.sigma.total_cmp(&b.sigma))
    });
    let header = [
        "name", "d", "sigma", "regime", "status", "alpha_B", "alpha", "p_pred", "p", "tail", "P drift", "H drift",
        "regrid jump", "focusing",
    ];
    let body: Vec<[String; 14]> = rows
        .iter()
        .map(|s| {
            let done = s.completed;
            let status = if done { s.status.clone() } else { format!("{} [incomplete]", s.status) };
            [
                s.name.clone(),
                s.d.to_string(),
                format!("{:.4}", s.sigma),
                s.regime.clone().unwrap_or_else(|| GAP.into()),
                status,
                cell(s.alpha_b, 4),
                fit_cell(s.alpha, s.alpha_rms, done),
                cell(s.p_pred, 4),
                fit_cell(s.p, s.p_rms, done),
                if done { s.tail.clone().unwrap_or_else(|| GAP.into()) } else { GAP.into() },
                sci(s.max_power_drift),
                sci(s.max_hamiltonian_drift),
                sci(s.max_regrid_power_jump),
                sci(s.focusing),
            ]
        })
        .collect();
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for r in &body {
        for (w, c) in widths.iter_mut().zip(r) {
            *w = (*w).max(c.chars().count());
        }
    }
    let mut out = String::new();
    let line = |cells: Vec<&str>, out: &mut String| {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, &w)| format!("{c}{}", " ".repeat(w - c.chars().count())))
            .collect();
        let _ = writeln!(out, "{}", padded.join("  ").trim_end());
    };
    line(header.to_vec(), &mut out);
    for r in &body {
        line(r.iter().map(String::as_str).collect(), &mut out);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(sigma: f64, alpha_b: f64, completed: bool) -> ExperimentSummary {
        ExperimentSummary {
            name: format!("s{sigma}"),
            sigma,
            d: 2,
            status: if completed { "collapsed".into() } else { "maximum steps".into() },
            completed,
            alpha_b: Some(alpha_b),
            alpha: Some(alpha_b + 0.01),
            alpha_rms: Some(1e-3),
            p: Some(0.27),
            ..Default::default()
        }
    }

    #[test]
    fn rows_sorted_by_alpha_b() {
        let rows = vec![row(4.0, 0.0, true), row(2.0, 1.0, true), row(8.0 / 3.0, 0.5, true)];
        let t = summary_table(&rows);
        let lines: Vec<&str> = t.lines().collect();
        assert_eq!(lines.len(), 4);
        assert!(lines[1].starts_with("s2 "));
        assert!(lines[3].starts_with("s4 "));
    }

    #[test]
    fn incomplete_runs_have_no_fits() {
        let t = summary_table(&[row(2.0, 1.0, false)]);
        let l = t.lines().nth(1).unwrap();
        assert!(l.contains("[incomplete]"));
        assert!(!l.contains("1.0100"));
    }

    #[test]
    fn partial_artifacts_give_gaps() {
        let dir = std::env::temp_dir().join(format!("bnls-report-{}", std::process::id()));
        let run = dir.join("a");
        fs::create_dir_all(&run).unwrap();
        fs::write(run.join(CONFIG_FILE), "[physics]\nd = 2\nsigma = 2\nA = 2\nr_c = 10\n").unwrap();
        let rows = collect_summaries(&dir).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].alpha_b, Some(1.0));
        assert!(rows[0].p.is_none());
        let t = summary_table(&rows);
        assert!(t.contains("missing summary"));
        fs::remove_dir_all(&dir).unwrap();
    }
}
