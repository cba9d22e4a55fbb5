use crate::diagnostics::{classify_regime, RegimeKind, TailClass};
use crate::error::{Error, Result};
use crate::evolution::SimConfig;
use crate::groundstate::{critical_power, RadialOptions};

/// What a preset run is expected to show.
#[derive(Debug, Clone, PartialEq)]
pub struct Expectations {
    pub regime: RegimeKind,
    /// Accepted interval for the fitted shrink rate.
    pub alpha: Option<(f64, f64)>,
    /// Accepted interval for the fitted blowup rate.
    pub p: Option<(f64, f64)>,
    /// Expected class of the `L^q L_t` tail, `q = 1/p_pred - 1`.
    pub tail: Option<TailClass>,
    /// Minimum `L(0)/L_end` the run must reach.
    pub min_focusing: Option<f64>,
    /// The run must end without collapse, `L` staying above half its start.
    pub global_existence: bool,
    /// Where the expected values come from.
    pub reference: String,
}

/// Figure panel labels used to name plot-data files.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct FigureLabels {
    pub rmax: Option<&'static str>,
    pub rescaled: Option<&'static str>,
    pub rate: Option<&'static str>,
    pub tail: Option<&'static str>,
    pub grid: Option<&'static str>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentPreset {
    pub name: String,
    pub description: String,
    pub config: SimConfig,
    pub expectations: Expectations,
    pub figures: FigureLabels,
}

/// Names accepted by [`preset`]; sweep members are listed by [`sweep_presets`].
pub const PRESET_NAMES: [&str; 6] = [
    "standing-ring-d2",
    "standing-ring-d2-deep",
    "shrinking-ring-d2",
    "critical-ring-d2",
    "critical-ring-d2-deep",
    "below-critical-power",
];

/// `σ` values of the sweeps in `d = 2` and `d = 3`.
pub fn sweep_sigmas(d: u32) -> Result<Vec<f64>> {
    match d {
        2 => Ok(vec![2.0, 16.0 / 7.0, 8.0 / 3.0, 16.0 / 5.0, 4.0]),
        3 => Ok(vec![4.0 / 3.0, 8.0 / 5.0, 2.0, 8.0 / 3.0, 4.0]),
        _ => Err(Error::InvalidInput(format!("no sweep defined for d = {d}"))),
    }
}

/// Settings shared by the collapse presets: a fine core, a regrid whenever
/// the ring moves two widths, and six-point solution transfer.
fn collapse_config(d: u32, sigma: f64, amplitude: f64, center: f64, nodes: usize, l_min: f64) -> SimConfig {
    let mut c = SimConfig::ring(d, sigma, amplitude, center);
    c.grid.nodes = nodes;
    c.stepping.c_dt = 0.025;
    c.regrid.min_points_in_core = 400;
    c.regrid.interpolation_points = 6;
    c.regrid.max_core_shift = Some(2.0);
    c.stopping.l_min = l_min;
    c.output.record_every = 1;
    c
}

/// Initial width `‖ψ₀‖∞^{-σ/2}` of a ring with peak `amplitude`.
fn initial_width(amplitude: f64, sigma: f64) -> f64 {
    amplitude.abs().powf(-sigma / 2.0)
}

/// `L_min` giving a focusing factor slightly above `factor`.
fn l_min_for(amplitude: f64, sigma: f64, factor: f64) -> f64 {
    initial_width(amplitude, sigma) / factor * 0.99
}

fn standing(deep: bool) -> ExperimentPreset {
    let l_min = if deep { 1e-8 } else { 1e-3 };
    ExperimentPreset {
        name: if deep { "standing-ring-d2-deep" } else { "standing-ring-d2" }.into(),
        description: format!("standing ring, d = 2, sigma = 4, psi0 = 2 exp(-(r-5)^2), L_min = {l_min:e}"),
        config: collapse_config(2, 4.0, 2.0, 5.0, 8192, l_min),
        expectations: Expectations {
            regime: RegimeKind::StandingRingCriticalExponent,
            alpha: None,
            p: Some((0.24, 0.27)),
            tail: None,
            min_focusing: None,
            global_existence: false,
            reference: "p = 0.2523 from a fit down to L = 1e-8; r_max tends to a positive constant; \
                        core close to the rescaled 1D ground state"
                .into(),
        },
        figures: FigureLabels {
            rmax: Some("fig4a"),
            rescaled: Some("fig4b"),
            rate: Some("fig5a"),
            tail: Some("fig5b"),
            grid: Some("fig11b"),
        },
    }
}

fn shrinking() -> ExperimentPreset {
    let sigma = 8.0 / 3.0;
    ExperimentPreset {
        name: "shrinking-ring-d2".into(),
        description: "shrinking ring, d = 2, sigma = 8/3, psi0 = 2 exp(-(r-10)^2), focusing 1e2".into(),
        config: collapse_config(2, sigma, 2.0, 10.0, 4096, l_min_for(2.0, sigma, 100.0)),
        expectations: Expectations {
            regime: RegimeKind::ShrinkingRing,
            alpha: Some((0.45, 0.55)),
            p: Some((0.27, 0.30)),
            tail: Some(TailClass::NegativeConstant),
            min_focusing: Some(100.0),
            global_existence: false,
            reference: "alpha = 0.496 (alpha_B = 0.5), p = 0.2844 (1/3.5 predicted), \
                        L^2.5 L_t tends to a negative constant"
                .into(),
        },
        figures: FigureLabels {
            rate: Some("fig6a"),
            tail: Some("fig6b"),
            ..Default::default()
        },
    }
}

fn critical(deep: bool) -> ExperimentPreset {
    let l_min = if deep { 1e-6 } else { l_min_for(2.5, 2.0, 1000.0) };
    ExperimentPreset {
        name: if deep { "critical-ring-d2-deep" } else { "critical-ring-d2" }.into(),
        description: format!("critical ring, d = 2, sigma = 2, psi0 = 2.5 exp(-(r-10)^2), L_min = {l_min:e}"),
        config: collapse_config(2, 2.0, 2.5, 10.0, 8192, l_min),
        expectations: Expectations {
            regime: RegimeKind::CriticalEqualRate,
            alpha: Some((0.95, 1.08)),
            p: Some((0.24, 0.26)),
            tail: None,
            min_focusing: Some(if deep { 1e5 } else { 1e3 }),
            global_existence: false,
            reference: "alpha = 1.02, p = 0.2476; L^3 L_t reported without a definite limit".into(),
        },
        figures: FigureLabels {
            rate: Some("fig10a"),
            tail: Some("fig10b"),
            ..Default::default()
        },
    }
}

/// Ring data `A exp(-((r-5)/2)²)` for `d = 2`, `σ = 2` normalized to
/// `0.9 P_cr`. A thin ring far out would focus linearly at the origin and
/// dip below half its initial width without any collapse.
fn below_critical() -> Result<ExperimentPreset> {
    let p_cr = critical_power(2, RadialOptions::default())?;
    let mut c = SimConfig::ring(2, 2.0, 1.0, 5.0);
    c.physics.width = 2.0;
    c.physics.power = Some(0.9 * p_cr);
    c.grid.nodes = 2048;
    c.grid.outer_radius = Some(40.0);
    c.stepping.dt_max = 2.5e-3;
    c.stopping.l_min = 1e-3;
    c.stopping.stagnation_steps = 5000;
    c.stopping.max_steps = 200_000;
    c.output.record_every = 10;
    Ok(ExperimentPreset {
        name: "below-critical-power".into(),
        description: format!("critical d = 2 ring with power 0.9 P_cr = {:.6}", 0.9 * p_cr),
        config: c,
        expectations: Expectations {
            regime: RegimeKind::CriticalEqualRate,
            alpha: None,
            p: None,
            tail: None,
            min_focusing: None,
            global_existence: true,
            reference: "solutions below the critical power exist globally".into(),
        },
        figures: FigureLabels::default(),
    })
}

/// Sweep member: ring `A exp(-(r-10)²)` focused by a factor 100.
///
/// `A = 2` except for `d = 3` with `α_B ≥ 1/2`, where that ring collapses
/// at the origin instead and `A = 3` is used. Only the `d = 2` members with
/// `α_B` in `[1/2, 1)` stay within the conservation budgets on 4096 nodes.
pub fn sweep_preset(d: u32, sigma: f64) -> Result<ExperimentPreset> {
    let label = classify_regime(sigma, d)?;
    let a = label.alpha_b;
    let shrinking = label.kind == RegimeKind::ShrinkingRing;
    let amplitude = if d == 3 && a >= 0.5 { 3.0 } else { 2.0 };
    let nodes = if d == 2 && shrinking && a >= 0.5 { 4096 } else { 8192 };
    let mut config = collapse_config(d, sigma, amplitude, 10.0, nodes, l_min_for(amplitude, sigma, 100.0));
    if d == 2 && shrinking && a < 0.5 {
        // The slowly shrinking ring radiates for tens of thousands of steps;
        // power drifts unless the outer grid keeps more nodes.
        config.regrid.resolution_fraction = 0.3;
    }
    Ok(ExperimentPreset {
        name: format!("sweep-d{d}-sigma-{sigma:.4}"),
        description: format!("sweep member d = {d}, sigma = {sigma:.6}, alpha_B = {a:.4}, A = {amplitude}"),
        config,
        expectations: Expectations {
            regime: label.kind,
            alpha: shrinking.then_some((a - 0.07, a + 0.07)),
            p: shrinking.then_some((label.p_pred - 0.02, label.p_pred + 0.02)),
            tail: None,
            min_focusing: Some(100.0),
            global_existence: false,
            reference: "alpha close to alpha_B and p close to 1/(3 + alpha_B), \
                        p slightly low for alpha_B >= 1/2"
                .into(),
        },
        figures: FigureLabels::default(),
    })
}

/// All members of the sweep in dimension `d`.
pub fn sweep_presets(d: u32) -> Result<Vec<ExperimentPreset>> {
    sweep_sigmas(d)?.into_iter().map(|s| sweep_preset(d, s)).collect()
}

/// Looks up a named preset.
pub fn preset(name: &str) -> Result<ExperimentPreset> {
    match name {
        "standing-ring-d2" => Ok(standing(false)),
        "standing-ring-d2-deep" => Ok(standing(true)),
        "shrinking-ring-d2" => Ok(shrinking()),
        "critical-ring-d2" => Ok(critical(false)),
        "critical-ring-d2-deep" => Ok(critical(true)),
        "below-critical-power" => below_critical(),
        _ => Err(Error::Config(format!(
            "unknown preset {name:?}; known presets: {}",
            PRESET_NAMES.join(", ")
        ))),
    }
}

/// Every named preset.
pub fn presets() -> Result<Vec<ExperimentPreset>> {
    PRESET_NAMES.iter().map(|n| preset(n)).collect()
}
