//! `bnls`: run, sweep and analyse ring-collapse experiments.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use bnls_core::groundstate::{solve_ground_state_1d, solve_ground_state_radial, OneDimensionalOptions, RadialOptions};
use bnls_core::harness::{
    analyze_directory, collect_summaries, parse_config, preset, run_experiment, run_sweep, summary_table,
    ExperimentPreset, PRESET_NAMES,
};

#[derive(Parser)]
#[command(name = "bnls", version, about = "Ring-type collapse in the radial biharmonic NLS")]
struct Cli {
    /// Worker threads for sweeps (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment from a preset or a configuration file.
    Run(RunArgs),
    /// Run the σ sweep of one dimension in parallel.
    Sweep(SweepArgs),
    /// Compute a ground state and write it as text.
    Groundstate(GroundStateArgs),
    /// Re-analyse a finished run directory.
    Analyze(DirArgs),
    /// Summary table over run directories.
    Report(DirArgs),
    /// List the named presets.
    Presets,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, conflicts_with = "config", required_unless_present = "config")]
    preset: Option<String>,
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory (default: runs/<name>).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Override the target width.
    #[arg(long)]
    lmin: Option<f64>,
}

#[derive(Args)]
struct SweepArgs {
    /// Dimension, 2 or 3.
    #[arg(long, default_value_t = 2)]
    d: u32,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    lmin: Option<f64>,
}

#[derive(Args)]
struct GroundStateArgs {
    #[arg(long)]
    sigma: f64,
    /// 1 for the line problem, otherwise the radial problem in `d` dimensions.
    #[arg(long, default_value_t = 1)]
    d: u32,
    /// Output file (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Node count.
    #[arg(long)]
    resolution: Option<usize>,
    /// Half-width of the periodic box, or outer radius.
    #[arg(long)]
    extent: Option<f64>,
}

#[derive(Args)]
struct DirArgs {
    /// Run directory, or a directory of run directories.
    #[arg(long)]
    out: PathBuf,
}

fn load_preset(args: &RunArgs) -> Result<ExperimentPreset> {
    let mut p = match (&args.preset, &args.config) {
        (Some(name), _) => preset(name)?,
        (None, Some(path)) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let cfg = parse_config(&text).with_context(|| format!("in {}", path.display()))?;
            let name = path.file_stem().map_or("run".into(), |s| s.to_string_lossy().into_owned());
            ExperimentPreset::custom(&name, cfg)?
        }
        (None, None) => bail!("either --preset or --config is required"),
    };
    if let Some(l) = args.lmin {
        p.config.stopping.l_min = l;
        p.config.validate()?;
    }
    Ok(p)
}

fn run(args: RunArgs) -> Result<ExitCode> {
    let p = load_preset(&args)?;
    let out = args.out.unwrap_or_else(|| Path::new("runs").join(&p.name));
    let report = run_experiment(&p, &out)?;
    print!("{}", report.summary.to_text());
    for c in &report.checks {
        println!(
            "check {}: {} (expected {}) {}",
            c.name,
            c.measured,
            c.expected,
            if c.passed { "pass" } else { "FAIL" }
        );
    }
    for n in &report.analysis.notes {
        println!("note: {n}");
    }
    println!("artifacts: {}", out.display());
    Ok(ExitCode::from(report.exit_code() as u8))
}

fn sweep(args: SweepArgs, threads: Option<usize>) -> Result<ExitCode> {
    let out = args.out.unwrap_or_else(|| PathBuf::from(format!("runs/sweep-d{}", args.d)));
    let r = run_sweep(args.d, &out, threads, args.lmin)?;
    print!("{}", r.table);
    Ok(if r.all_completed() { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

fn groundstate(args: GroundStateArgs) -> Result<ExitCode> {
    let gs = if args.d == 1 {
        let mut o = OneDimensionalOptions::default();
        if let Some(n) = args.resolution {
            o.resolution = n;
        }
        if let Some(x) = args.extent {
            o.half_width = x;
        }
        solve_ground_state_1d(args.sigma, o)?
    } else {
        let mut o = RadialOptions::default();
        if let Some(n) = args.resolution {
            o.resolution = n;
        }
        if let Some(x) = args.extent {
            o.outer_radius = x;
        }
        solve_ground_state_radial(args.sigma, args.d, o)?
    };
    eprintln!(
        "sigma {} d {}: norm_sq {:.12} residual {:.3e} peak {:.10} iterations {}",
        gs.sigma,
        gs.d,
        gs.norm_sq,
        gs.residual,
        gs.peak(),
        gs.iterations
    );
    match args.out {
        Some(path) => fs::write(&path, gs.to_text()).with_context(|| format!("writing {}", path.display()))?,
        None => print!("{}", gs.to_text()),
    }
    Ok(ExitCode::SUCCESS)
}

fn analyze(args: DirArgs) -> Result<ExitCode> {
    let s = analyze_directory(&args.out)?;
    print!("{}", s.to_text());
    Ok(ExitCode::SUCCESS)
}

fn report(args: DirArgs) -> Result<ExitCode> {
    let rows = collect_summaries(&args.out)?;
    if rows.is_empty() {
        bail!("no run artifacts below {}", args.out.display());
    }
    let table = summary_table(&rows);
    fs::write(args.out.join("report.txt"), &table)?;
    print!("{table}");
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    let res = match cli.command {
        Command::Run(a) => run(a),
        Command::Sweep(a) => sweep(a, cli.threads),
        Command::Groundstate(a) => groundstate(a),
        Command::Analyze(a) => analyze(a),
        Command::Report(a) => report(a),
        Command::Presets => {
            for n in PRESET_NAMES {
                match preset(n) {
                    Ok(p) => println!("{n}: {}", p.description),
                    Err(e) => println!("{n}: {e}"),
                }
            }
            Ok(ExitCode::SUCCESS)
        }
    };
    res.unwrap_or_else(|e| {
        eprintln!("error: {e:#}");
        ExitCode::from(2)
    })
}
