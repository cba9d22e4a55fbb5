use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::discretization::{quadrature_weights, DimensionParams};
use crate::error::{Error, Result};
use crate::mesh::{MonitorParams, RadialGrid, RegridPolicy, MIN_NODES};

use super::WaveField;

/// Equation parameters and the initial condition
/// `ψ₀(r) = A exp(-((r - r_c)/w)²)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhysicsConfig {
    pub d: u32,
    pub sigma: f64,
    #[serde(alias = "A")]
    pub amplitude: f64,
    #[serde(alias = "r_c")]
    pub center: f64,
    #[serde(default = "default_width")]
    pub width: f64,
    /// Rescales `A` so that the initial power equals this value.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub power: Option<f64>,
}

fn default_width() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridConfig {
    pub nodes: usize,
    /// Defaults to four times the ring centre (at least `center + 8 width`).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub outer_radius: Option<f64>,
    /// Redistribution passes applied to the analytic initial condition.
    pub initial_passes: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            nodes: 2048,
            outer_radius: None,
            initial_passes: 4,
        }
    }
}

/// How the corrector passes treat the nonlinear term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CorrectorForm {
    /// `N` evaluated at the average `(ψⁿ + ψ*)/2` on the right-hand side.
    Explicit,
    /// `|ψ|^{2σ}` frozen at the average and the step taken implicitly as a
    /// Crank-Nicolson step of the linear operator `Δ² - |ψ̄|^{2σ}`.
    #[default]
    Potential,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SteppingConfig {
    /// `dt = c_dt · L⁴`.
    pub c_dt: f64,
    pub dt_max: f64,
    pub correctors: usize,
    pub corrector_form: CorrectorForm,
}

impl Default for SteppingConfig {
    fn default() -> Self {
        Self {
            c_dt: 0.05,
            dt_max: 1e-2,
            correctors: 2,
            corrector_form: CorrectorForm::default(),
        }
    }
}

/// Regrid trigger and monitor settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RegridConfig {
    pub min_points_in_core: usize,
    pub core_half_width: f64,
    pub resolution_fraction: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spacing_cap: Option<f64>,
    pub smoothness: bool,
    pub max_sweeps: usize,
    pub sweep_tolerance: f64,
    /// Nodes in the Lagrange window of the solution transfer (4 = cubic).
    pub interpolation_points: usize,
    /// Also regrid once `r_max` has moved this many widths `L` since the last
    /// regrid. Keeps a moving ring inside its refined zone.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_core_shift: Option<f64>,
}

impl Default for RegridConfig {
    fn default() -> Self {
        Self::from_parts(RegridPolicy::default(), MonitorParams::default())
    }
}

impl RegridConfig {
    pub fn from_parts(policy: RegridPolicy, monitor: MonitorParams) -> Self {
        Self {
            min_points_in_core: policy.min_points_in_core,
            core_half_width: policy.core_half_width,
            resolution_fraction: monitor.resolution_fraction,
            spacing_cap: monitor.spacing_cap,
            smoothness: monitor.smoothness,
            max_sweeps: monitor.max_sweeps,
            sweep_tolerance: monitor.sweep_tolerance,
            interpolation_points: 4,
            max_core_shift: None,
        }
    }

    pub fn policy(&self) -> RegridPolicy {
        RegridPolicy {
            min_points_in_core: self.min_points_in_core,
            core_half_width: self.core_half_width,
        }
    }

    pub fn monitor(&self) -> MonitorParams {
        MonitorParams {
            resolution_fraction: self.resolution_fraction,
            spacing_cap: self.spacing_cap,
            smoothness: self.smoothness,
            max_sweeps: self.max_sweeps,
            sweep_tolerance: self.sweep_tolerance,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct StoppingConfig {
    pub l_min: f64,
    pub max_steps: u64,
    /// Wall-clock limit in seconds; `0` disables it.
    pub max_wall_seconds: f64,
    /// Steps without a new minimum of `L` (by `stagnation_ratio`) after
    /// which the run is declared non-collapsing.
    pub stagnation_steps: u64,
    pub stagnation_ratio: f64,
}

impl Default for StoppingConfig {
    fn default() -> Self {
        Self {
            l_min: 1e-3,
            max_steps: 2_000_000,
            max_wall_seconds: 0.0,
            stagnation_steps: 20_000,
            stagnation_ratio: 0.99,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    /// Record every n-th step (regrid steps and the final step are always recorded).
    pub record_every: u64,
    /// Snapshot each time `L` first drops below a power of ten.
    pub snapshot_decades: bool,
    /// Extra snapshot levels of `L`.
    pub snapshot_levels: Vec<f64>,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            record_every: 1,
            snapshot_decades: true,
            snapshot_levels: Vec::new(),
        }
    }
}

/// Complete description of a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimConfig {
    pub physics: PhysicsConfig,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default)]
    pub stepping: SteppingConfig,
    #[serde(default)]
    pub regrid: RegridConfig,
    #[serde(default)]
    pub stopping: StoppingConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

impl SimConfig {
    /// Gaussian ring with all other settings at their defaults.
    pub fn ring(d: u32, sigma: f64, amplitude: f64, center: f64) -> Self {
        Self {
            physics: PhysicsConfig {
                d,
                sigma,
                amplitude,
                center,
                width: 1.0,
                power: None,
            },
            grid: GridConfig::default(),
            stepping: SteppingConfig::default(),
            regrid: RegridConfig::default(),
            stopping: StoppingConfig::default(),
            output: OutputConfig::default(),
        }
    }

    pub fn dims(&self) -> Result<DimensionParams> {
        DimensionParams::new(self.physics.d, self.physics.sigma)
    }

    pub fn outer_radius(&self) -> f64 {
        let p = &self.physics;
        self.grid
            .outer_radius
            .unwrap_or_else(|| (4.0 * p.center).max(p.center + 8.0 * p.width))
    }

    /// Fills every optional value with its effective default.
    pub fn resolved(&self) -> Self {
        let mut c = self.clone();
        c.grid.outer_radius = Some(self.outer_radius());
        if c.regrid.spacing_cap.is_none() {
            c.regrid.spacing_cap = Some(self.outer_radius() / (self.grid.nodes as f64 / 4.0));
        }
        c
    }

    pub fn validate(&self) -> Result<()> {
        self.dims()?;
        let p = &self.physics;
        let bad = |msg: String| Err(Error::Config(msg));
        if !p.amplitude.is_finite() || p.amplitude == 0.0 {
            return bad("amplitude must be finite and nonzero".into());
        }
        if !(p.center >= 0.0) {
            return bad("center must be non-negative".into());
        }
        if !(p.width > 0.0) {
            return bad("width must be positive".into());
        }
        if let Some(pw) = p.power {
            if !(pw > 0.0) {
                return bad("power must be positive".into());
            }
        }
        if self.grid.nodes < MIN_NODES {
            return bad(format!("grid nodes must be at least {MIN_NODES}, got {}", self.grid.nodes));
        }
        let outer = self.outer_radius();
        if !(outer >= p.center + 4.0 * p.width) {
            return bad(format!(
                "outer_radius {outer} must exceed center + 4 widths ({})",
                p.center + 4.0 * p.width
            ));
        }
        let s = &self.stepping;
        if !(s.c_dt > 0.0) || !(s.dt_max > 0.0) {
            return bad("c_dt and dt_max must be positive".into());
        }
        if !(self.stopping.l_min > 0.0) {
            return bad("l_min must be positive".into());
        }
        if !(self.stopping.stagnation_ratio > 0.0 && self.stopping.stagnation_ratio <= 1.0) {
            return bad("stagnation_ratio must lie in (0, 1]".into());
        }
        if self.output.record_every == 0 {
            return bad("record_every must be at least 1".into());
        }
        if self.regrid.min_points_in_core == 0 || !(self.regrid.core_half_width > 0.0) {
            return bad("regrid policy needs a positive core window and point count".into());
        }
        if let Some(k) = self.regrid.max_core_shift {
            if !(k > 0.0) {
                return bad(format!("max_core_shift must be positive, got {k}"));
            }
        }
        let ip = self.regrid.interpolation_points;
        if ip < 2 || !ip.is_multiple_of(2) || ip > MIN_NODES {
            return bad(format!("interpolation_points must be even and between 2 and {MIN_NODES}, got {ip}"));
        }
        self.regrid.monitor().validate().map_err(|e| Error::Config(e.to_string()))
    }

    /// Human-readable initial condition.
    pub fn initial_condition_formula(&self) -> String {
        let p = &self.physics;
        format!(
            "psi0(r) = {} * exp(-((r - {}) / {})^2)",
            self.effective_amplitude().unwrap_or(p.amplitude),
            p.center,
            p.width
        )
    }

    /// Amplitude after the optional power normalization.
    pub fn effective_amplitude(&self) -> Result<f64> {
        let p = &self.physics;
        match p.power {
            None => Ok(p.amplitude),
            Some(target) => {
                let grid = RadialGrid::uniform(20_001, self.outer_radius())?;
                let unit = SimConfig {
                    physics: PhysicsConfig {
                        amplitude: 1.0,
                        power: None,
                        ..p.clone()
                    },
                    ..self.clone()
                };
                let f = unit.initial_field(&grid, 1.0);
                let w = quadrature_weights(&grid, p.d);
                let p1: f64 = w.iter().zip(&f.values).map(|(w, v)| w * v.norm_sqr()).sum();
                Ok((target / p1).sqrt() * p.amplitude.signum())
            }
        }
    }

    fn initial_field(&self, grid: &RadialGrid, amplitude: f64) -> WaveField {
        let p = &self.physics;
        let outer = grid.outer_radius();
        let mut f = WaveField::from_fn(grid.nodes(), 0.0, |r| {
            let z = (r - p.center) / p.width;
            Complex64::new(amplitude * (-z * z).exp(), 0.0)
        });
        // The clamped outer node is pinned to zero.
        if let Some(last) = f.values.last_mut() {
            debug_assert_eq!(grid.outer_radius(), outer);
            *last = Complex64::new(0.0, 0.0);
        }
        f
    }

    /// Samples the initial condition on `grid`.
    pub fn initial_state(&self, grid: &RadialGrid) -> Result<WaveField> {
        Ok(self.initial_field(grid, self.effective_amplitude()?))
    }
}
