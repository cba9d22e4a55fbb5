//! Monitor functions for static grid redistribution.
//!
//! Three factors are multiplied node by node:
//!
//! * `w1`: solution resolution, `sqrt(1 + (β |ψ_r| / max|ψ|)²)`. The length
//!   `β` is fixed by requiring the gradient term to carry a prescribed share
//!   of the total monitor mass, so the number of nodes that follow the
//!   collapsing core does not depend on how far the collapse has gone.
//! * `w2`: spacing cap, `1 + Δr / Δr_cap`.
//! * `w3`: grid smoothness, `sqrt(1 + |Δ²r| / Δr)`, which spreads the jump
//!   between the fine core spacing and the coarse exterior spacing over a
//!   transition layer.
//!
//! `w2` and `w3` depend on the grid being built, so [`redistribute`] iterates
//! equidistribution to a fixed point.

use serde::{Deserialize, Serialize};

use super::{equidistribute, RadialGrid};
use crate::discretization::fornberg_weights;
use crate::error::{Error, Result};
use crate::evolution::WaveField;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MonitorParams {
    /// Share of the `w1` mass carried by the gradient term, in `(0, 1)`.
    pub resolution_fraction: f64,
    /// Maximum exterior spacing `Δr_cap`; `None` means `outer_radius / (N/4)`.
    pub spacing_cap: Option<f64>,
    /// Enables the smoothness factor `w3`. Disabling it reproduces the sharp
    /// core/exterior bipartition of the grid.
    pub smoothness: bool,
    /// Maximum number of fixed-point sweeps.
    pub max_sweeps: usize,
    /// Sweeps stop once no node moves by more than this fraction of its
    /// local cell width.
    pub sweep_tolerance: f64,
}

impl Default for MonitorParams {
    fn default() -> Self {
        Self {
            resolution_fraction: 0.5,
            spacing_cap: None,
            smoothness: true,
            max_sweeps: 10,
            sweep_tolerance: 1e-3,
        }
    }
}

impl MonitorParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.resolution_fraction > 0.0 && self.resolution_fraction < 1.0) {
            return Err(Error::InvalidInput(format!(
                "resolution_fraction must lie in (0, 1), got {}",
                self.resolution_fraction
            )));
        }
        if let Some(cap) = self.spacing_cap {
            if !(cap > 0.0) {
                return Err(Error::InvalidInput("spacing_cap must be positive".into()));
            }
        }
        if self.max_sweeps == 0 {
            return Err(Error::InvalidInput("max_sweeps must be at least 1".into()));
        }
        Ok(())
    }

    fn cap(&self, grid: &RadialGrid) -> f64 {
        self.spacing_cap
            .unwrap_or(grid.outer_radius() / (grid.len() as f64 / 4.0))
    }
}

/// Per-node monitor factors on one grid.
#[derive(Debug, Clone, PartialEq)]
pub struct MonitorWeights {
    pub w1: Vec<f64>,
    pub w2: Vec<f64>,
    pub w3: Vec<f64>,
    pub composite: Vec<f64>,
}

/// `|ψ_r|` at the nodes by three-point differences (zero at the origin by symmetry).
fn gradient_modulus(field: &WaveField, grid: &RadialGrid) -> Vec<f64> {
    let x = grid.nodes();
    let v = &field.values;
    let n = x.len();
    let mut g = vec![0.0; n];
    for i in 1..n {
        let (idx, pos): ([usize; 3], [f64; 3]) = if i + 1 < n {
            ([i - 1, i, i + 1], [x[i - 1] - x[i], 0.0, x[i + 1] - x[i]])
        } else {
            ([i - 2, i - 1, i], [x[i - 2] - x[i], x[i - 1] - x[i], 0.0])
        };
        let w = fornberg_weights(0.0, &pos, 1);
        let d = v[idx[0]] * w[1][0] + v[idx[1]] * w[1][1] + v[idx[2]] * w[1][2];
        g[i] = d.norm();
    }
    g
}

/// Solution-resolution factor `w1` on the field's own grid.
pub fn resolution_weight(field: &WaveField, grid: &RadialGrid, params: &MonitorParams) -> Result<Vec<f64>> {
    field.check_len(grid.len())?;
    let amax = field.max_amplitude();
    let n = grid.len();
    if !(amax > 0.0) {
        return Ok(vec![1.0; n]);
    }
    let grad: Vec<f64> = gradient_modulus(field, grid).into_iter().map(|g| g / amax).collect();
    let x = grid.nodes();
    let mass: f64 = (0..n - 1)
        .map(|m| 0.5 * (grad[m] + grad[m + 1]) * (x[m + 1] - x[m]))
        .sum();
    // A field without resolvable structure leaves the grid alone.
    if !(mass > 1e-10 * grid.outer_radius()) {
        return Ok(vec![1.0; n]);
    }
    let f = params.resolution_fraction;
    let beta = f / (1.0 - f) * grid.outer_radius() / mass;
    Ok(grad.iter().map(|g| (1.0 + (beta * g).powi(2)).sqrt()).collect())
}

/// Spacing-cap factor `w2 = 1 + Δr/Δr_cap`, with `Δr` the mean width of the
/// cells adjacent to each node.
pub fn spacing_weight(grid: &RadialGrid, cap: f64) -> Vec<f64> {
    let h = grid.spacings();
    let n = grid.len();
    (0..n)
        .map(|m| {
            let local = match m {
                0 => h[0],
                _ if m == n - 1 => h[n - 2],
                _ => 0.5 * (h[m - 1] + h[m]),
            };
            1.0 + local / cap
        })
        .collect()
}

/// Smoothness factor `w3 = sqrt(1 + |Δ²r| / Δr)`.
///
/// `Δ²r = Δr_{m+1} - Δr_m` is attached to the node shared by the two cells
/// and divided by the narrower of them, so growth and shrinkage of the
/// spacing are penalized alike. At the origin the mirrored cell makes the
/// second difference vanish; the outer node copies its neighbour.
pub fn smoothness_weight(grid: &RadialGrid) -> Vec<f64> {
    let h = grid.spacings();
    let n = grid.len();
    let mut w = vec![1.0; n];
    for m in 1..n - 1 {
        let second = h[m] - h[m - 1];
        w[m] = (1.0 + second.abs() / h[m].min(h[m - 1])).sqrt();
    }
    w[n - 1] = w[n - 2];
    w
}

/// All monitor factors on the field's grid.
pub fn build_monitor(field: &WaveField, grid: &RadialGrid, params: &MonitorParams) -> Result<MonitorWeights> {
    params.validate()?;
    if grid.spacings().iter().any(|h| !(*h > 0.0)) {
        return Err(Error::InvalidGrid("degenerate spacing".into()));
    }
    let w1 = resolution_weight(field, grid, params)?;
    let w2 = spacing_weight(grid, params.cap(grid));
    let w3 = if params.smoothness {
        smoothness_weight(grid)
    } else {
        vec![1.0; grid.len()]
    };
    let composite = (0..grid.len()).map(|m| w1[m] * w2[m] * w3[m]).collect();
    Ok(MonitorWeights { w1, w2, w3, composite })
}

/// Result of a grid redistribution.
#[derive(Debug, Clone)]
pub struct Redistribution {
    pub grid: RadialGrid,
    /// Monitor factors on the grid of the last sweep.
    pub weights: MonitorWeights,
    pub sweeps: usize,
    /// Largest node movement of the last sweep, relative to the local cell width.
    pub last_movement: f64,
}

fn linear_resample(from: &RadialGrid, values: &[f64], to: &RadialGrid) -> Vec<f64> {
    let x = from.nodes();
    to.nodes()
        .iter()
        .map(|&r| {
            let m = from.locate(r);
            let t = ((r - x[m]) / (x[m + 1] - x[m])).clamp(0.0, 1.0);
            values[m] * (1.0 - t) + values[m + 1] * t
        })
        .collect()
}

/// Builds a new grid with the same node count by equidistributing the
/// composite monitor, iterating until `w2`/`w3` are consistent with the grid.
pub fn redistribute(field: &WaveField, grid: &RadialGrid, params: &MonitorParams) -> Result<Redistribution> {
    params.validate()?;
    let n = grid.len();
    let w1_source = resolution_weight(field, grid, params)?;
    let cap = params.cap(grid);
    let mut candidate = grid.clone();
    let mut sweeps = 0;
    let mut movement;
    let mut weights;
    loop {
        let w1 = linear_resample(grid, &w1_source, &candidate);
        let w2 = spacing_weight(&candidate, cap);
        let w3 = if params.smoothness {
            smoothness_weight(&candidate)
        } else {
            vec![1.0; n]
        };
        let composite: Vec<f64> = (0..n).map(|m| w1[m] * w2[m] * w3[m]).collect();
        let next = equidistribute(&candidate, &composite, n)?;
        sweeps += 1;
        let h = candidate.spacings();
        movement = next
            .nodes()
            .iter()
            .zip(candidate.nodes())
            .enumerate()
            .map(|(m, (a, b))| {
                let local = if m == 0 { h[0] } else if m == n - 1 { h[n - 2] } else { h[m - 1].min(h[m]) };
                (a - b).abs() / local
            })
            .fold(0.0_f64, f64::max);
        weights = MonitorWeights { w1, w2, w3, composite };
        candidate = next;
        if movement < params.sweep_tolerance || sweeps >= params.max_sweeps {
            break;
        }
    }
    Ok(Redistribution {
        grid: candidate,
        weights,
        sweeps,
        last_movement: movement,
    })
}

/// Regridding policy: how many nodes must cover the collapsing core.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RegridPolicy {
    /// Minimum node count inside `|r - r_max| <= core_half_width · L`.
    pub min_points_in_core: usize,
    /// Half-width of the core window in units of `L`.
    pub core_half_width: f64,
}

impl Default for RegridPolicy {
    fn default() -> Self {
        Self {
            min_points_in_core: 40,
            core_half_width: 4.0,
        }
    }
}

/// True when the core window `|r - r_max| <= core_half_width · L` holds fewer
/// than `policy.min_points_in_core` nodes.
pub fn needs_regrid(grid: &RadialGrid, l: f64, r_max: f64, policy: &RegridPolicy) -> bool {
    core_points(grid, l, r_max, policy) < policy.min_points_in_core
}

/// Node count inside the core window.
pub fn core_points(grid: &RadialGrid, l: f64, r_max: f64, policy: &RegridPolicy) -> usize {
    grid.count_within(r_max, policy.core_half_width * l)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn uniform_grid_has_unit_smoothness_weight() {
        let g = RadialGrid::uniform(50, 3.0).unwrap();
        assert!(smoothness_weight(&g).iter().all(|&w| (w - 1.0).abs() < 1e-12));
    }

    #[test]
    fn doubling_spacing_gives_sqrt_two() {
        // spacings h, h, 2h, 2h, ...: the node between h and 2h has Δ²r = h, Δr = h.
        let mut nodes = vec![0.0, 1.0, 2.0];
        for k in 1..8 {
            nodes.push(2.0 + 2.0 * k as f64);
        }
        let g = RadialGrid::new(nodes).unwrap();
        let w = smoothness_weight(&g);
        assert!((w[2] - 2f64.sqrt()).abs() < 1e-14);
        assert!((w[1] - 1.0).abs() < 1e-14 && (w[4] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn constant_field_gives_unit_resolution_weight() {
        let g = RadialGrid::uniform(40, 5.0).unwrap();
        let f = WaveField::from_fn(g.nodes(), 0.0, |_| Complex64::new(0.7, -0.2));
        let w = build_monitor(&f, &g, &MonitorParams::default()).unwrap();
        assert!(w.w1.iter().all(|&v| v == 1.0));
        for m in 0..40 {
            assert!(w.w1[m] >= 1.0 && w.w2[m] >= 1.0 && w.w3[m] >= 1.0);
            assert!((w.composite[m] - w.w1[m] * w.w2[m] * w.w3[m]).abs() < 1e-15);
        }
    }

    #[test]
    fn regrid_trigger_threshold() {
        let g = RadialGrid::uniform(1001, 10.0).unwrap();
        let policy = RegridPolicy::default();
        // spacing 0.01: half-width 4L = 0.9996 holds the 199 nodes 4.01 ..= 5.99.
        assert_eq!(core_points(&g, 0.2499, 5.0, &policy), 199);
        assert!(!needs_regrid(&g, 0.2499, 5.0, &policy));
        // half-width 0.195 holds 39 nodes (4.81 ..= 5.19).
        assert_eq!(core_points(&g, 0.04875, 5.0, &policy), 39);
        assert!(needs_regrid(&g, 0.04875, 5.0, &policy));
    }
}
