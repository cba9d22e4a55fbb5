//! Experiment driver: configuration files, presets for the reference runs,
//! artifact output, post-run analysis, summary tables and parallel sweeps.
//!
//! A run directory holds `config.toml`, `series.csv`, `regrids.csv`,
//! `snapshots/`, fit reports, two-column `.dat` plot data, `summary.txt` and
//! `checks.txt`.

mod analysis;
mod config;
mod experiment;
mod presets;
mod report;
mod sweep;

pub use analysis::{analyze_series, compare_with_ground_state, Analysis, AnalysisOptions, ProfileComparison};
pub use config::{config_to_toml, parse_config};
pub use experiment::{
    analyze_directory, final_snapshot, run_experiment, write_analysis_files, Check, ExperimentReport, ExperimentSummary,
    BLOWUP_FIT_FILE, CHECKS_FILE, CONFIG_FILE, LIMIT_FILE, REGRIDS_FILE, SERIES_FILE, SHRINK_FIT_FILE, SNAPSHOT_DIR,
    SUMMARY_FILE,
};
pub use presets::{preset, presets, sweep_preset, sweep_presets, sweep_sigmas, ExperimentPreset, Expectations, FigureLabels, PRESET_NAMES};
pub use report::{collect_summaries, summary_table, GAP};
pub use sweep::{run_members, run_sweep, write_rate_plots, SweepReport, SWEEP_TABLE_FILE};
