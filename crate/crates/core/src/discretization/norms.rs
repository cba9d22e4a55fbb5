//! Power, Hamiltonian and related integrals on non-uniform radial grids.
//!
//! All integrals are `∫ f(r) r^{d-1} dr` with the angular surface constant
//! omitted. Power and Hamiltonian use the sixth-order weights of
//! [`high_order_quadrature_weights`]; trapezoid weights are kept for
//! comparison.

use super::biharmonic::{laplacian_operator, BoundarySpec};
use super::fornberg::fornberg_weights;
use super::DimensionParams;
use crate::error::Result;
use crate::evolution::WaveField;
use crate::mesh::RadialGrid;

/// Trapezoid weights `W_m` with `Σ W_m f_m ≈ ∫ f r^{d-1} dr`.
pub fn quadrature_weights(grid: &RadialGrid, d: u32) -> Vec<f64> {
    let x = grid.nodes();
    let n = x.len();
    let mut w = vec![0.0; n];
    for m in 0..n - 1 {
        let h = x[m + 1] - x[m];
        w[m] += 0.5 * h;
        w[m + 1] += 0.5 * h;
    }
    for (wm, &r) in w.iter_mut().zip(x) {
        *wm *= r.powi(d as i32 - 1);
    }
    w
}

/// Five-point Gauss-Legendre nodes and weights on `[0, 1]`.
const GAUSS5: [(f64, f64); 5] = [
    (0.046_910_077_030_668_004, 0.118_463_442_528_094_54),
    (0.230_765_344_947_158_45, 0.239_314_335_249_683_23),
    (0.5, 0.284_444_444_444_444_46),
    (0.769_234_655_052_841_6, 0.239_314_335_249_683_23),
    (0.953_089_922_969_332, 0.118_463_442_528_094_54),
];

/// Weights `W_m` with `Σ W_m f_m ≈ ∫ f r^{d-1} dr` for even functions `f`,
/// exact when `f` is a polynomial of degree 5 on every six-node window.
///
/// Each cell integrates the quintic through the six nearest nodes (mirror
/// nodes `-r_k` near the origin, windows shifted inward at the outer end)
/// against `r^{d-1}`.
pub fn high_order_quadrature_weights(grid: &RadialGrid, d: u32) -> Vec<f64> {
    let x = grid.nodes();
    let n = x.len() as isize;
    let mut w = vec![0.0; x.len()];
    for m in 0..x.len() - 1 {
        let first = (m as isize - 2).min(n - 6);
        let (pos, col): (Vec<f64>, Vec<usize>) = (first..first + 6)
            .map(|j| if j < 0 { (-x[(-j) as usize], (-j) as usize) } else { (x[j as usize], j as usize) })
            .unzip();
        let (a, h) = (x[m], x[m + 1] - x[m]);
        for (s, gw) in GAUSS5 {
            let z = a + s * h;
            let lag = fornberg_weights(z, &pos, 0);
            let scale = gw * h * z.powi(d as i32 - 1);
            for (k, &c) in col.iter().enumerate() {
                w[c] += scale * lag[0][k];
            }
        }
    }
    w
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Norms {
    /// `P = ‖ψ‖₂²`.
    pub power: f64,
    /// `H = ‖Δψ‖₂² - ‖ψ‖_{2σ+2}^{2σ+2} / (σ+1)`.
    pub hamiltonian: f64,
    /// `‖Δψ‖₂²`.
    pub laplacian_sq: f64,
    /// `‖ψ‖_{2σ+2}^{2σ+2}`.
    pub nonlinear: f64,
    /// `‖ψ‖_∞` over the nodes.
    pub sup: f64,
}

pub fn weighted_norms(field: &WaveField, grid: &RadialGrid, dims: &DimensionParams) -> Result<Norms> {
    field.check_len(grid.len())?;
    let w = high_order_quadrature_weights(grid, dims.d);
    let lap = laplacian_operator(grid, dims.d, BoundarySpec::default())?;
    let dpsi = lap.apply(&field.values)?;
    let mut power = 0.0;
    let mut laplacian_sq = 0.0;
    let mut nonlinear = 0.0;
    let mut sup: f64 = 0.0;
    for ((v, dv), wm) in field.values.iter().zip(&dpsi).zip(&w) {
        let a2 = v.norm_sqr();
        power += wm * a2;
        laplacian_sq += wm * dv.norm_sqr();
        nonlinear += wm * a2.powf(dims.sigma + 1.0);
        sup = sup.max(a2.sqrt());
    }
    Ok(Norms {
        power,
        hamiltonian: laplacian_sq - nonlinear / (dims.sigma + 1.0),
        laplacian_sq,
        nonlinear,
        sup,
    })
}

/// Discrete power `Σ W_m |ψ_m|²`.
pub fn power(field: &WaveField, grid: &RadialGrid, d: u32) -> f64 {
    high_order_quadrature_weights(grid, d)
        .iter()
        .zip(&field.values)
        .map(|(w, v)| w * v.norm_sqr())
        .sum()
}
