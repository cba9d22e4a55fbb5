use std::fmt::Write as _;
use std::fs;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use log::{info, warn};

use super::analysis::{analyze_series, compare_with_ground_state, Analysis, AnalysisOptions};
use super::config::config_to_toml;
use super::presets::{ExperimentPreset, Expectations, FigureLabels};
use crate::diagnostics::{classify_regime, rescaled_profile, DiagnosticsSeries, RegimeKind};
use crate::discretization::weighted_norms;
use crate::error::{Error, Result};
use crate::evolution::{run, RunObserver, RunOutcome, RunStatus, SimConfig, Snapshot};
use crate::groundstate::{solve_ground_state_1d, OneDimensionalOptions};
use crate::mesh::RadialGrid;

pub const CONFIG_FILE: &str = "config.toml";
pub const SERIES_FILE: &str = "series.csv";
pub const REGRIDS_FILE: &str = "regrids.csv";
pub const SUMMARY_FILE: &str = "summary.txt";
pub const CHECKS_FILE: &str = "checks.txt";
pub const BLOWUP_FIT_FILE: &str = "fit_blowup_rate.txt";
pub const SHRINK_FIT_FILE: &str = "fit_shrink_rate.txt";
pub const LIMIT_FILE: &str = "limit_diagnostic.txt";
pub const SNAPSHOT_DIR: &str = "snapshots";

/// Half-width of the rescaled-profile window in units of `L`.
const RESCALED_HALF_WINDOW: f64 = 5.0;
const RESCALED_SAMPLES: usize = 401;

impl ExperimentPreset {
    /// Wraps a plain configuration: expectations carry only the regime.
    pub fn custom(name: &str, config: SimConfig) -> Result<Self> {
        config.validate()?;
        let regime = classify_regime(config.physics.sigma, config.physics.d)
            .map(|r| r.kind)
            .unwrap_or(RegimeKind::Subcritical);
        Ok(Self {
            name: name.into(),
            description: config.initial_condition_formula(),
            config,
            expectations: Expectations {
                regime,
                alpha: None,
                p: None,
                tail: None,
                min_focusing: None,
                global_existence: false,
                reference: "user configuration".into(),
            },
            figures: FigureLabels::default(),
        })
    }
}

/// One expectation compared with the measured value.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub measured: String,
    pub expected: String,
    pub passed: bool,
}

impl Check {
    fn interval(name: &str, value: Option<f64>, (lo, hi): (f64, f64)) -> Self {
        Self {
            name: name.into(),
            measured: value.map_or("missing".into(), |v| format!("{v:.4}")),
            expected: format!("[{lo}, {hi}]"),
            passed: value.is_some_and(|v| v >= lo && v <= hi),
        }
    }
}

/// Headline numbers of a finished experiment.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ExperimentSummary {
    pub name: String,
    pub sigma: f64,
    pub d: u32,
    pub status: String,
    pub completed: bool,
    pub regime: Option<String>,
    pub alpha_b: Option<f64>,
    pub p_pred: Option<f64>,
    pub alpha: Option<f64>,
    pub alpha_rms: Option<f64>,
    pub p: Option<f64>,
    pub p_rms: Option<f64>,
    pub tail: Option<String>,
    pub max_power_drift: Option<f64>,
    pub max_hamiltonian_drift: Option<f64>,
    pub max_regrid_power_jump: Option<f64>,
    pub focusing: Option<f64>,
    /// `min L / L(0)`.
    pub min_width_ratio: Option<f64>,
    pub steps: Option<u64>,
    pub regrids: Option<u64>,
    pub max_spacing_ratio: Option<f64>,
}

fn opt<T: std::fmt::Display>(v: &Option<T>) -> String {
    v.as_ref().map_or("none".into(), |v| v.to_string())
}

impl ExperimentSummary {
    /// `key: value` lines.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "name: {}", self.name);
        let _ = writeln!(s, "sigma: {}", self.sigma);
        let _ = writeln!(s, "d: {}", self.d);
        let _ = writeln!(s, "status: {}", self.status);
        let _ = writeln!(s, "completed: {}", self.completed);
        let _ = writeln!(s, "regime: {}", opt(&self.regime));
        let _ = writeln!(s, "alpha_b: {}", opt(&self.alpha_b));
        let _ = writeln!(s, "p_pred: {}", opt(&self.p_pred));
        let _ = writeln!(s, "alpha: {}", opt(&self.alpha));
        let _ = writeln!(s, "alpha_rms: {}", opt(&self.alpha_rms));
        let _ = writeln!(s, "p: {}", opt(&self.p));
        let _ = writeln!(s, "p_rms: {}", opt(&self.p_rms));
        let _ = writeln!(s, "tail: {}", opt(&self.tail));
        let _ = writeln!(s, "max_power_drift: {}", opt(&self.max_power_drift));
        let _ = writeln!(s, "max_hamiltonian_drift: {}", opt(&self.max_hamiltonian_drift));
        let _ = writeln!(s, "max_regrid_power_jump: {}", opt(&self.max_regrid_power_jump));
        let _ = writeln!(s, "focusing: {}", opt(&self.focusing));
        let _ = writeln!(s, "min_width_ratio: {}", opt(&self.min_width_ratio));
        let _ = writeln!(s, "steps: {}", opt(&self.steps));
        let _ = writeln!(s, "regrids: {}", opt(&self.regrids));
        let _ = writeln!(s, "max_spacing_ratio: {}", opt(&self.max_spacing_ratio));
        s
    }

    /// Reads [`Self::to_text`] output; absent or unparsable values stay `None`.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut s = Self::default();
        for line in text.lines() {
            let Some((k, v)) = line.split_once(':') else { continue };
            let v = v.trim();
            let f = || (v != "none").then(|| v.parse::<f64>().ok()).flatten();
            let u = || (v != "none").then(|| v.parse::<u64>().ok()).flatten();
            let text = || (v != "none").then(|| v.to_string());
            match k.trim() {
                "name" => s.name = v.into(),
                "sigma" => s.sigma = v.parse().map_err(|_| Error::InvalidInput(format!("bad sigma {v:?}")))?,
                "d" => s.d = v.parse().map_err(|_| Error::InvalidInput(format!("bad d {v:?}")))?,
                "status" => s.status = v.into(),
                "completed" => s.completed = v == "true",
                "regime" => s.regime = text(),
                "alpha_b" => s.alpha_b = f(),
                "p_pred" => s.p_pred = f(),
                "alpha" => s.alpha = f(),
                "alpha_rms" => s.alpha_rms = f(),
                "p" => s.p = f(),
                "p_rms" => s.p_rms = f(),
                "tail" => s.tail = text(),
                "max_power_drift" => s.max_power_drift = f(),
                "max_hamiltonian_drift" => s.max_hamiltonian_drift = f(),
                "max_regrid_power_jump" => s.max_regrid_power_jump = f(),
                "focusing" => s.focusing = f(),
                "min_width_ratio" => s.min_width_ratio = f(),
                "steps" => s.steps = u(),
                "regrids" => s.regrids = u(),
                "max_spacing_ratio" => s.max_spacing_ratio = f(),
                _ => {}
            }
        }
        Ok(s)
    }
}

/// Result of [`run_experiment`].
#[derive(Debug)]
pub struct ExperimentReport {
    pub preset: ExperimentPreset,
    pub outcome: RunOutcome,
    pub analysis: Analysis,
    pub summary: ExperimentSummary,
    pub checks: Vec<Check>,
    pub out_dir: PathBuf,
}

impl ExperimentReport {
    /// Process exit status: 0 iff the run completed.
    pub fn exit_code(&self) -> i32 {
        if self.summary.completed {
            0
        } else {
            1
        }
    }
}

struct SnapshotWriter {
    dir: PathBuf,
    error: Option<std::io::Error>,
}

impl RunObserver for SnapshotWriter {
    fn on_snapshot(&mut self, snap: &Snapshot) {
        if self.error.is_some() {
            return;
        }
        let stem = format!("L_{:.3e}", snap.l);
        let res = fs::write(self.dir.join(format!("{stem}.txt")), snap.to_text())
            .and_then(|_| fs::write(self.dir.join(format!("{stem}.grid")), snap.grid.to_text()));
        if let Err(e) = res {
            self.error = Some(e);
        }
    }
}

fn plot_name(label: Option<&str>, stem: &str) -> String {
    match label {
        Some(l) => format!("{l}_{stem}.dat"),
        None => format!("{stem}.dat"),
    }
}

fn write_columns(path: &Path, header: &str, rows: impl Iterator<Item = (f64, f64)>) -> Result<()> {
    let mut s = format!("# {header}\n");
    for (x, y) in rows {
        let _ = writeln!(s, "{x:.10e} {y:.10e}");
    }
    fs::write(path, s)?;
    Ok(())
}

/// Snapshot of the state a run ended in.
pub fn final_snapshot(outcome: &RunOutcome) -> Result<Snapshot> {
    let st = &outcome.state;
    let dims = outcome
        .snapshots
        .first()
        .map(|s| s.dims)
        .ok_or_else(|| Error::InvalidInput("run produced no snapshot".into()))?;
    let norms = weighted_norms(&st.field, &st.grid, &dims)?;
    let last = outcome.series.records.last();
    Ok(Snapshot {
        t: st.field.time,
        l: last.map_or(outcome.final_width, |r| r.l),
        r_max: last.map_or(0.0, |r| r.r_max),
        power: norms.power,
        hamiltonian: norms.hamiltonian,
        dims,
        grid: st.grid.clone(),
        field: st.field.clone(),
    })
}

fn checks_for(exp: &Expectations, summary: &ExperimentSummary, status: &RunStatus) -> Vec<Check> {
    let mut out = Vec::new();
    if let Some(iv) = exp.alpha {
        out.push(Check::interval("alpha", summary.alpha, iv));
    }
    if let Some(iv) = exp.p {
        out.push(Check::interval("p", summary.p, iv));
    }
    if let Some(t) = exp.tail {
        out.push(Check {
            name: "tail".into(),
            measured: opt(&summary.tail),
            expected: t.to_string(),
            passed: summary.tail.as_deref() == Some(&t.to_string()),
        });
    }
    if let Some(f) = exp.min_focusing {
        out.push(Check {
            name: "focusing".into(),
            measured: summary.focusing.map_or("missing".into(), |v| format!("{v:.4e}")),
            expected: format!(">= {f}"),
            passed: summary.focusing.is_some_and(|v| v >= f),
        });
    }
    if exp.global_existence {
        let ratio = summary.min_width_ratio;
        out.push(Check {
            name: "global existence".into(),
            measured: format!("status {status}, min L / L0 = {}", opt(&ratio.map(|r| format!("{r:.4}")))),
            expected: "no collapse, min L / L0 >= 0.5".into(),
            passed: *status == RunStatus::NoCollapse && ratio.is_some_and(|r| r >= 0.5),
        });
    }
    out
}

/// Runs `preset`, writing into `out_dir`:
///
/// * `config.toml`: effective configuration,
/// * `series.csv`, `regrids.csv`: diagnostics,
/// * `snapshots/`: field and grid whenever `L` passes a focusing level,
/// * fit reports and the limit diagnostic (collapsing runs only),
/// * two-column plot-data files, named after figure panels where known,
/// * `summary.txt` and `checks.txt`.
///
/// Solver failures end the run with a failed status rather than an error;
/// errors are reserved for I/O and invalid configurations.
pub fn run_experiment(preset: &ExperimentPreset, out_dir: &Path) -> Result<ExperimentReport> {
    let cfg = &preset.config;
    cfg.validate()?;
    fs::create_dir_all(out_dir.join(SNAPSHOT_DIR))?;
    fs::write(out_dir.join(CONFIG_FILE), config_to_toml(cfg)?)?;
    info!("experiment {} -> {}", preset.name, out_dir.display());

    let mut writer = SnapshotWriter {
        dir: out_dir.join(SNAPSHOT_DIR),
        error: None,
    };
    let outcome = run(cfg, &mut writer)?;
    if let Some(e) = writer.error {
        return Err(e.into());
    }
    outcome.series.write_csv(BufWriter::new(fs::File::create(out_dir.join(SERIES_FILE))?))?;
    outcome
        .series
        .write_regrids_csv(BufWriter::new(fs::File::create(out_dir.join(REGRIDS_FILE))?))?;

    let (sigma, d) = (cfg.physics.sigma, cfg.physics.d);
    let analysis = analyze_series(&outcome.series, sigma, d, &AnalysisOptions::default());
    let summary = summarize(&preset.name, sigma, d, &outcome, &analysis);
    write_analysis_files(out_dir, &analysis, &outcome.status, preset.figures)?;

    // Rescaled profiles of each snapshot and of the final state.
    let labels = preset.figures;
    let mut snaps: Vec<Snapshot> = outcome.snapshots.clone();
    match final_snapshot(&outcome) {
        Ok(s) => snaps.push(s),
        Err(e) => warn!("no final snapshot: {e}"),
    }
    for (k, snap) in snaps.iter().enumerate() {
        let stem = if k + 1 == snaps.len() {
            "rescaled_final".to_string()
        } else {
            format!("rescaled_L_{:.1e}", snap.l)
        };
        if let Ok(p) = rescaled_profile(
            &snap.field,
            &snap.grid,
            sigma,
            (-RESCALED_HALF_WINDOW, RESCALED_HALF_WINDOW),
            RESCALED_SAMPLES,
        ) {
            write_columns(
                &out_dir.join(plot_name(labels.rescaled, &stem)),
                "rho |psi|/max|psi|",
                p.rho.iter().copied().zip(p.values.iter().copied()),
            )?;
        }
    }
    if preset.expectations.regime == RegimeKind::StandingRingCriticalExponent {
        if let Some(snap) = snaps.last() {
            let gs = solve_ground_state_1d(sigma, OneDimensionalOptions::default())?;
            let cmp = compare_with_ground_state(snap, &gs, RESCALED_HALF_WINDOW, RESCALED_SAMPLES)?;
            write_columns(
                &out_dir.join(plot_name(labels.rescaled, "ground_state_1d")),
                "rho R(lambda rho)/R(0)",
                cmp.rho.iter().copied().zip(cmp.ground_state.iter().copied()),
            )?;
        }
    }
    write_grid_spacing(&out_dir.join(plot_name(labels.grid, "grid_spacing")), &outcome.state.grid)?;

    let checks = checks_for(&preset.expectations, &summary, &outcome.status);
    fs::write(out_dir.join(SUMMARY_FILE), summary.to_text())?;
    let mut ct = String::new();
    for c in &checks {
        let _ = writeln!(
            ct,
            "{}: measured {} expected {} {}",
            c.name,
            c.measured,
            c.expected,
            if c.passed { "pass" } else { "FAIL" }
        );
    }
    let _ = writeln!(ct, "reference: {}", preset.expectations.reference);
    fs::write(out_dir.join(CHECKS_FILE), ct)?;
    info!("experiment {} finished: {}", preset.name, outcome.status);

    Ok(ExperimentReport {
        preset: preset.clone(),
        outcome,
        analysis,
        summary,
        checks,
        out_dir: out_dir.to_path_buf(),
    })
}

fn summarize(name: &str, sigma: f64, d: u32, outcome: &RunOutcome, a: &Analysis) -> ExperimentSummary {
    let collapsed = outcome.status != RunStatus::NoCollapse;
    let max_spacing_ratio = outcome
        .series
        .regrids
        .iter()
        .map(|e| e.spacing_ratio)
        .fold(outcome.initial_spacing_ratio, f64::max);
    ExperimentSummary {
        name: name.into(),
        sigma,
        d,
        status: outcome.status.to_string(),
        completed: outcome.status.completed(),
        regime: a.regime.as_ref().map(|r| r.kind.to_string()),
        alpha_b: a.regime.as_ref().map(|r| r.alpha_b),
        p_pred: a.regime.as_ref().map(|r| r.p_pred),
        alpha: a.shrink.as_ref().filter(|_| collapsed).map(|f| f.exponent),
        alpha_rms: a.shrink.as_ref().filter(|_| collapsed).map(|f| f.rms_log_residual),
        p: a.blowup.as_ref().filter(|_| collapsed).map(|f| f.exponent),
        p_rms: a.blowup.as_ref().filter(|_| collapsed).map(|f| f.rms_log_residual),
        tail: a.limit.as_ref().filter(|_| collapsed).map(|l| l.tail.to_string()),
        max_power_drift: Some(a.max_power_drift),
        max_hamiltonian_drift: Some(a.max_hamiltonian_drift),
        max_regrid_power_jump: Some(a.max_regrid_power_jump),
        focusing: Some(a.focusing),
        min_width_ratio: outcome.series.min_width().map(|m| m / outcome.initial_width),
        steps: Some(outcome.state.step),
        regrids: Some(outcome.state.regrids),
        max_spacing_ratio: Some(max_spacing_ratio),
    }
}

fn write_grid_spacing(path: &Path, grid: &RadialGrid) -> Result<()> {
    let x = grid.nodes();
    write_columns(path, "r dr", x.windows(2).map(|w| (w[0], w[1] - w[0])))
}

/// Writes fit reports and plot data derived from `analysis`. Fit reports are
/// skipped for runs that ended without collapse.
pub fn write_analysis_files(out_dir: &Path, a: &Analysis, status: &RunStatus, labels: FigureLabels) -> Result<()> {
    write_columns(
        &out_dir.join(plot_name(labels.rmax, "rmax_vs_focusing")),
        "1/L r_max",
        a.thinned.iter().map(|&(_, l, r)| (1.0 / l, r)),
    )?;
    if *status == RunStatus::NoCollapse {
        return Ok(());
    }
    if let Some(f) = &a.blowup {
        fs::write(out_dir.join(BLOWUP_FIT_FILE), f.to_report("L = kappa (Tc - t)^p"))?;
        if let Some(tc) = f.tc_estimate {
            write_columns(
                &out_dir.join(plot_name(labels.rate, "width_vs_time_to_collapse")),
                "Tc-t L",
                a.thinned.iter().filter(|s| s.0 < tc).map(|&(t, l, _)| (tc - t, l)),
            )?;
        }
    }
    if let Some(f) = &a.shrink {
        fs::write(out_dir.join(SHRINK_FIT_FILE), f.to_report("r_max = r0 L^alpha"))?;
    }
    if let (Some(d), Some(rep)) = (&a.limit, a.limit_report()) {
        fs::write(out_dir.join(LIMIT_FILE), rep)?;
        write_columns(
            &out_dir.join(plot_name(labels.tail, "limit_diagnostic")),
            &format!("1/L L^{}L_t", d.q),
            d.focusing.iter().copied().zip(d.values.iter().copied()),
        )?;
    }
    Ok(())
}

/// Re-analyses a finished run directory from its `series.csv`, rewriting the
/// fit reports, plot data and summary.
pub fn analyze_directory(dir: &Path) -> Result<ExperimentSummary> {
    let cfg = super::config::parse_config(&fs::read_to_string(dir.join(CONFIG_FILE))?)?;
    let series = DiagnosticsSeries::read_csv(fs::File::open(dir.join(SERIES_FILE))?)?;
    let mut series = series;
    if let Ok(f) = fs::File::open(dir.join(REGRIDS_FILE)) {
        series.regrids = DiagnosticsSeries::read_regrids_csv(f)?;
    }
    let (sigma, d) = (cfg.physics.sigma, cfg.physics.d);
    let a = analyze_series(&series, sigma, d, &AnalysisOptions::default());
    let old = fs::read_to_string(dir.join(SUMMARY_FILE))
        .ok()
        .and_then(|t| ExperimentSummary::from_text(&t).ok());
    let status = match old.as_ref().map(|s| s.status.as_str()) {
        Some("global existence") => RunStatus::NoCollapse,
        _ => RunStatus::Collapsed,
    };
    write_analysis_files(dir, &a, &status, FigureLabels::default())?;
    let collapsed = status != RunStatus::NoCollapse;
    let mut s = old.unwrap_or_else(|| ExperimentSummary {
        name: dir.file_name().map_or("run".into(), |n| n.to_string_lossy().into_owned()),
        status: "unknown".into(),
        ..Default::default()
    });
    s.sigma = sigma;
    s.d = d;
    s.regime = a.regime.as_ref().map(|r| r.kind.to_string());
    s.alpha_b = a.regime.as_ref().map(|r| r.alpha_b);
    s.p_pred = a.regime.as_ref().map(|r| r.p_pred);
    s.alpha = a.shrink.as_ref().filter(|_| collapsed).map(|f| f.exponent);
    s.alpha_rms = a.shrink.as_ref().filter(|_| collapsed).map(|f| f.rms_log_residual);
    s.p = a.blowup.as_ref().filter(|_| collapsed).map(|f| f.exponent);
    s.p_rms = a.blowup.as_ref().filter(|_| collapsed).map(|f| f.rms_log_residual);
    s.tail = a.limit.as_ref().filter(|_| collapsed).map(|l| l.tail.to_string());
    s.max_power_drift = Some(a.max_power_drift);
    s.max_hamiltonian_drift = Some(a.max_hamiltonian_drift);
    s.max_regrid_power_jump = Some(a.max_regrid_power_jump);
    s.focusing = Some(a.focusing);
    fs::write(dir.join(SUMMARY_FILE), s.to_text())?;
    Ok(s)
}
