use std::fmt::{self, Write as _};
use std::time::Instant;

use log::{debug, info, warn};
use serde::{Deserialize, Serialize};

use crate::diagnostics::{peak, width_from_amplitude, DiagnosticRecord, DiagnosticsSeries, RegridEvent};
use crate::discretization::{power, weighted_norms, DimensionParams};
use crate::error::{Error, Result};
use crate::mesh::{core_points, needs_regrid, redistribute, regrid_with, RadialGrid};

use super::{choose_dt, Integrator, SimConfig, StepOptions, WaveField};

/// Everything the time loop carries from one step to the next.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationState {
    pub field: WaveField,
    pub grid: RadialGrid,
    pub step: u64,
    pub regrids: u64,
    /// `∫ dt / L⁴`, the self-similar phase clock.
    pub tau: f64,
}

/// Field dump taken when the collapse passes a focusing level.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub t: f64,
    pub l: f64,
    pub r_max: f64,
    pub power: f64,
    pub hamiltonian: f64,
    pub dims: DimensionParams,
    pub grid: RadialGrid,
    pub field: WaveField,
}

impl Snapshot {
    /// Header lines, then `r  Re(ψ)  Im(ψ)` rows with 17 significant digits.
    pub fn to_text(&self) -> String {
        let mut s = String::with_capacity(self.grid.len() * 72 + 256);
        let _ = writeln!(s, "# t: {:.16e}", self.t);
        let _ = writeln!(s, "# L: {:.16e}", self.l);
        let _ = writeln!(s, "# r_max: {:.16e}", self.r_max);
        let _ = writeln!(s, "# P: {:.16e}", self.power);
        let _ = writeln!(s, "# H: {:.16e}", self.hamiltonian);
        let _ = writeln!(s, "# N: {}", self.grid.len());
        let _ = writeln!(s, "# d: {}", self.dims.d);
        let _ = writeln!(s, "# sigma: {:.16e}", self.dims.sigma);
        for (r, v) in self.grid.nodes().iter().zip(&self.field.values) {
            let _ = writeln!(s, "{r:.16e} {:.16e} {:.16e}", v.re, v.im);
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut head = std::collections::HashMap::new();
        let mut r = Vec::new();
        let mut vals = Vec::new();
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
            if let Some(h) = line.strip_prefix('#') {
                if let Some((k, v)) = h.split_once(':') {
                    head.insert(k.trim().to_string(), v.trim().to_string());
                }
                continue;
            }
            let cols: Vec<f64> = line
                .split_whitespace()
                .map(|c| c.parse::<f64>().map_err(|e| Error::InvalidInput(format!("bad snapshot value {c:?}: {e}"))))
                .collect::<Result<_>>()?;
            if cols.len() != 3 {
                return Err(Error::InvalidInput(format!("snapshot row needs 3 columns: {line:?}")));
            }
            r.push(cols[0]);
            vals.push(num_complex::Complex64::new(cols[1], cols[2]));
        }
        let get = |k: &str| -> Result<f64> {
            head.get(k)
                .ok_or_else(|| Error::InvalidInput(format!("snapshot header lacks {k}")))?
                .parse::<f64>()
                .map_err(|e| Error::InvalidInput(format!("bad snapshot header {k}: {e}")))
        };
        let t = get("t")?;
        Ok(Self {
            t,
            l: get("L")?,
            r_max: get("r_max")?,
            power: get("P")?,
            hamiltonian: get("H")?,
            dims: DimensionParams::new(get("d")? as u32, get("sigma")?)?,
            grid: RadialGrid::new(r)?,
            field: WaveField::new(vals, t),
        })
    }
}

/// Hooks called while a run progresses.
pub trait RunObserver {
    fn on_record(&mut self, _record: &DiagnosticRecord) {}
    fn on_regrid(&mut self, _event: &RegridEvent, _grid: &RadialGrid) {}
    fn on_snapshot(&mut self, _snapshot: &Snapshot) {}
}

/// Observer that ignores everything.
pub struct NoObserver;

impl RunObserver for NoObserver {}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RunStatus {
    /// `L` reached the target `l_min`.
    Collapsed,
    /// `L` stopped decreasing for the stagnation budget.
    NoCollapse,
    MaxSteps,
    WallTime,
    /// `dt` fell below the resolution of the time variable.
    TimeResolution,
    /// The solver failed; the message is kept.
    Failed(String),
}

impl RunStatus {
    /// Collapse to the target, or global existence confirmed by stagnation.
    pub fn completed(&self) -> bool {
        matches!(self, Self::Collapsed | Self::NoCollapse)
    }
}

impl fmt::Display for RunStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Collapsed => f.write_str("collapsed"),
            Self::NoCollapse => f.write_str("global existence"),
            Self::MaxSteps => f.write_str("step limit reached"),
            Self::WallTime => f.write_str("wall-time limit reached"),
            Self::TimeResolution => f.write_str("time resolution exhausted"),
            Self::Failed(m) => write!(f, "failed: {m}"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub status: RunStatus,
    pub state: SimulationState,
    pub series: DiagnosticsSeries,
    pub snapshots: Vec<Snapshot>,
    pub initial_width: f64,
    pub final_width: f64,
    /// Spacing ratio of the initial grid.
    pub initial_spacing_ratio: f64,
}

impl RunOutcome {
    /// `L(0) / L(end)`.
    pub fn focusing_factor(&self) -> f64 {
        self.initial_width / self.final_width
    }
}

struct Sample {
    l: f64,
    r_max: f64,
    power: f64,
    hamiltonian: f64,
    kinetic: f64,
    n_core: usize,
}

fn sample(state: &SimulationState, dims: &DimensionParams, cfg: &SimConfig) -> Result<Sample> {
    let norms = weighted_norms(&state.field, &state.grid, dims)?;
    let pk = peak(&state.field, &state.grid)?;
    let l = width_from_amplitude(pk.amplitude, dims.sigma)?;
    Ok(Sample {
        l,
        r_max: pk.r_max,
        power: norms.power,
        hamiltonian: norms.hamiltonian,
        kinetic: norms.laplacian_sq,
        n_core: core_points(&state.grid, l, pk.r_max, &cfg.regrid.policy()),
    })
}

/// Grid adapted to the analytic initial condition.
pub fn initial_grid(cfg: &SimConfig) -> Result<(RadialGrid, WaveField)> {
    let mut grid = RadialGrid::uniform(cfg.grid.nodes, cfg.outer_radius())?;
    let mut field = cfg.initial_state(&grid)?;
    for _ in 0..cfg.grid.initial_passes {
        grid = redistribute(&field, &grid, &cfg.regrid.monitor())?.grid;
        field = cfg.initial_state(&grid)?;
    }
    Ok((grid, field))
}

/// Runs the adaptive simulation described by `cfg`.
///
/// Each iteration samples the diagnostics, regrids when the core is
/// under-resolved, picks `dt = c_dt L⁴` and takes one step. Solver failures
/// end the run with [`RunStatus::Failed`] and keep everything recorded so far.
pub fn run(cfg: &SimConfig, observer: &mut dyn RunObserver) -> Result<RunOutcome> {
    cfg.validate()?;
    let dims = cfg.dims()?;
    let opts = StepOptions {
        correctors: cfg.stepping.correctors,
        form: cfg.stepping.corrector_form,
    };
    let policy = cfg.regrid.policy();
    let monitor = cfg.regrid.monitor();
    let (grid, field) = initial_grid(cfg)?;
    let initial_spacing_ratio = grid.max_adjacent_spacing_ratio();
    let mut integrator = Integrator::new(&grid, dims, opts)?;
    let mut state = SimulationState {
        field,
        grid,
        step: 0,
        regrids: 0,
        tau: 0.0,
    };
    let mut series = DiagnosticsSeries::new();
    let mut snapshots = Vec::new();
    let started = Instant::now();

    let first = sample(&state, &dims, cfg)?;
    let l0 = first.l;
    let mut levels: Vec<f64> = cfg.output.snapshot_levels.iter().copied().filter(|v| *v < l0).collect();
    if cfg.output.snapshot_decades {
        let mut k = l0.log10().floor();
        if 10f64.powf(k) >= l0 {
            k -= 1.0;
        }
        while 10f64.powf(k) >= cfg.stopping.l_min * 0.999_999 {
            levels.push(10f64.powf(k));
            k -= 1.0;
        }
    }
    levels.sort_by(|a, b| b.total_cmp(a));
    levels.dedup();
    let mut next_level = 0;
    let mut anchor = peak(&state.field, &state.grid).map_or(0.0, |p| p.r_max);
    let mut best_l = l0;
    let mut last_improvement = 0u64;
    info!(
        "run start: d = {}, sigma = {}, N = {}, L0 = {l0:.4e}, {}",
        dims.d,
        dims.sigma,
        state.grid.len(),
        cfg.initial_condition_formula()
    );

    let status = loop {
        let s = match sample(&state, &dims, cfg) {
            Ok(s) => s,
            Err(e) => break RunStatus::Failed(e.to_string()),
        };
        if s.l < best_l * cfg.stopping.stagnation_ratio {
            best_l = s.l;
            last_improvement = state.step;
        }
        let stop = if s.l <= cfg.stopping.l_min {
            Some(RunStatus::Collapsed)
        } else if state.step >= cfg.stopping.max_steps {
            Some(RunStatus::MaxSteps)
        } else if cfg.stopping.max_wall_seconds > 0.0
            && started.elapsed().as_secs_f64() > cfg.stopping.max_wall_seconds
        {
            Some(RunStatus::WallTime)
        } else if state.step - last_improvement >= cfg.stopping.stagnation_steps {
            Some(RunStatus::NoCollapse)
        } else {
            None
        };

        let dt = choose_dt(s.l, cfg.stepping.c_dt, cfg.stepping.dt_max);
        let drifted = cfg
            .regrid
            .max_core_shift
            .is_some_and(|k| (s.r_max - anchor).abs() > k * s.l);
        let regrid_now = stop.is_none() && (drifted || needs_regrid(&state.grid, s.l, s.r_max, &policy));
        if state.step.is_multiple_of(cfg.output.record_every) || stop.is_some() || regrid_now {
            let rec = DiagnosticRecord {
                step: state.step,
                t: state.field.time,
                l: s.l,
                r_max: s.r_max,
                power: s.power,
                hamiltonian: s.hamiltonian,
                kinetic: s.kinetic,
                dt,
                n_core: s.n_core,
                regrids: state.regrids,
            };
            if let Err(e) = series.push(rec) {
                break RunStatus::Failed(e.to_string());
            }
            observer.on_record(&rec);
        }
        while next_level < levels.len() && s.l <= levels[next_level] {
            let snap = Snapshot {
                t: state.field.time,
                l: s.l,
                r_max: s.r_max,
                power: s.power,
                hamiltonian: s.hamiltonian,
                dims,
                grid: state.grid.clone(),
                field: state.field.clone(),
            };
            debug!("snapshot at L = {:.4e} (level {:.1e})", s.l, levels[next_level]);
            observer.on_snapshot(&snap);
            snapshots.push(snap);
            next_level += 1;
        }
        if let Some(st) = stop {
            break st;
        }

        if regrid_now {
            let result = redistribute(&state.field, &state.grid, &monitor)
                .and_then(|red| Ok((regrid_with(&state.field, &state.grid, &red.grid, cfg.regrid.interpolation_points)?, red)));
            match result {
                Ok((new_field, red)) => {
                    let event = RegridEvent {
                        step: state.step,
                        t: state.field.time,
                        l: s.l,
                        power_before: s.power,
                        power_after: power(&new_field, &red.grid, dims.d),
                        spacing_ratio: red.grid.max_adjacent_spacing_ratio(),
                        sweeps: red.sweeps,
                    };
                    match Integrator::new(&red.grid, dims, opts) {
                        Ok(next) => integrator = next,
                        Err(e) => break RunStatus::Failed(e.to_string()),
                    }
                    state.grid = red.grid;
                    state.field = new_field;
                    state.regrids += 1;
                    anchor = s.r_max;
                    let after = core_points(&state.grid, s.l, s.r_max, &policy);
                    debug!(
                        "regrid {} at step {}: L = {:.3e}, core points {} -> {after}, ratio {:.2}",
                        state.regrids, state.step, s.l, s.n_core, event.spacing_ratio
                    );
                    if after < policy.min_points_in_core {
                        warn!("regrid left only {after} core points at L = {:.3e}", s.l);
                    }
                    series.regrids.push(event);
                    observer.on_regrid(&event, &state.grid);
                }
                Err(e) => break RunStatus::Failed(format!("regrid: {e}")),
            }
        }

        let t_old = state.field.time;
        match integrator.step(&state.field, dt) {
            Ok(next) => state.field = next,
            Err(e) => break RunStatus::Failed(e.to_string()),
        }
        if !(state.field.time > t_old) {
            break RunStatus::TimeResolution;
        }
        state.step += 1;
        state.tau += dt / s.l.powi(4);
    };

    let final_width = series.records.last().map_or(l0, |r| r.l);
    info!(
        "run end: {status} after {} steps, {} regrids, L = {final_width:.4e}",
        state.step, state.regrids
    );
    Ok(RunOutcome {
        status,
        state,
        series,
        snapshots,
        initial_width: l0,
        final_width,
        initial_spacing_ratio,
    })
}
