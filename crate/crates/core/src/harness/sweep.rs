use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use log::{error, info};
use rayon::prelude::*;

use super::experiment::{run_experiment, ExperimentSummary};
use super::presets::{sweep_presets, ExperimentPreset};
use super::report::summary_table;
use crate::error::{Error, Result};

pub const SWEEP_TABLE_FILE: &str = "sweep_table.txt";

/// Outcome of [`run_sweep`].
#[derive(Debug, Clone)]
pub struct SweepReport {
    pub d: u32,
    pub summaries: Vec<ExperimentSummary>,
    pub table: String,
}

impl SweepReport {
    pub fn all_completed(&self) -> bool {
        self.summaries.iter().all(|s| s.completed)
    }
}

/// Runs `members` in parallel, each in its own subdirectory of `out_dir`.
/// A member that errors is kept as an incomplete row.
pub fn run_members(members: &[ExperimentPreset], out_dir: &Path, threads: Option<usize>) -> Result<Vec<ExperimentSummary>> {
    fs::create_dir_all(out_dir)?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = threads {
        builder = builder.num_threads(t);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::InvalidInput(format!("thread pool: {e}")))?;
    let summaries = pool.install(|| {
        members
            .par_iter()
            .map(|p| match run_experiment(p, &out_dir.join(&p.name)) {
                Ok(r) => r.summary,
                Err(e) => {
                    error!("{}: {e}", p.name);
                    ExperimentSummary {
                        name: p.name.clone(),
                        sigma: p.config.physics.sigma,
                        d: p.config.physics.d,
                        status: format!("error: {e}"),
                        ..Default::default()
                    }
                }
            })
            .collect::<Vec<_>>()
    });
    Ok(summaries)
}

/// Sweep over the `σ` list of dimension `d`: one artifact set per member,
/// the combined table and the `α`, `p` against `α_B` plot data.
pub fn run_sweep(d: u32, out_dir: &Path, threads: Option<usize>, l_min: Option<f64>) -> Result<SweepReport> {
    let mut members = sweep_presets(d)?;
    if let Some(l) = l_min {
        for m in &mut members {
            m.config.stopping.l_min = l;
            m.config.validate()?;
        }
    }
    info!("sweep d = {d}: {} members", members.len());
    let summaries = run_members(&members, out_dir, threads)?;
    let table = summary_table(&summaries);
    fs::write(out_dir.join(SWEEP_TABLE_FILE), &table)?;
    write_rate_plots(out_dir, d, &summaries)?;
    Ok(SweepReport { d, summaries, table })
}

/// `fig7_d{d}.dat` holds `(α_B, α)` and `fig8_d{d}.dat` holds `(α_B, p)`
/// for the completed members, with the predicted curve in a comment header.
pub fn write_rate_plots(out_dir: &Path, d: u32, summaries: &[ExperimentSummary]) -> Result<()> {
    let mut rows: Vec<&ExperimentSummary> = summaries.iter().filter(|s| s.completed).collect();
    rows.sort_by(|a, b| a.alpha_b.unwrap_or(0.0).total_cmp(&b.alpha_b.unwrap_or(0.0)));
    let mut alpha = String::from("# alpha_B alpha (predicted alpha = alpha_B)\n");
    let mut p = String::from("# alpha_B p (predicted p = 1/(3 + alpha_B))\n");
    for s in rows {
        let Some(ab) = s.alpha_b else { continue };
        if let Some(a) = s.alpha {
            let _ = writeln!(alpha, "{ab:.10e} {a:.10e}");
        }
        if let Some(v) = s.p {
            let _ = writeln!(p, "{ab:.10e} {v:.10e}");
        }
    }
    fs::write(out_dir.join(format!("fig7_d{d}.dat")), alpha)?;
    fs::write(out_dir.join(format!("fig8_d{d}.dat")), p)?;
    Ok(())
}
