//! Non-uniform finite-difference stencils for radial differential operators.
//!
//! The radial biharmonic operator
//!
//! ```text
//! Δ²_r = ∂⁴_r + 2(d-1)/r ∂³_r + (d-1)(d-3)/r² ∂²_r - (d-1)(d-3)/r³ ∂_r
//! ```
//!
//! is discretized row by row: each row takes the seven-node window centred
//! on its node and applies the operator to the window's degree-6 interpolant,
//! so rows are exact on polynomials up to degree six and third-order accurate
//! on arbitrary grids. Windows that reach past `r = 0` borrow mirror nodes
//! `-r_k` with value `ψ_k` (even extension, which enforces `ψ_r(0) = ψ_rrr(0) = 0`).
//! The origin row never touches the singular coefficients: for even functions
//! `Δ²ψ(0) = d(d+2)/3 · ψ''''(0)`.

use num_complex::Complex64;

use super::fornberg::fornberg_weights;
use super::BandedOperator;
use crate::error::{Error, Result};
use crate::mesh::{RadialGrid, MIN_NODES};

/// Treatment of the outer end of the grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OuterClosure {
    /// `ψ = ψ_r = 0` at `r = R`: the last node is pinned to zero and windows
    /// reaching past `R` use the even reflection about `R`.
    #[default]
    Clamped,
    /// No boundary condition; windows near `R` are shifted inward. Rows are
    /// then pure interpolation stencils, useful for checking exactness. The
    /// shifted rows widen the lower band to `2 · half`.
    OneSided,
}

/// Boundary treatment of radial operators. The inner end is always the
/// even-symmetry closure at `r = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct BoundarySpec {
    pub outer: OuterClosure,
}

impl BoundarySpec {
    /// Rows whose value is fixed to zero by the outer closure.
    pub fn pinned_rows(&self, n: usize) -> Vec<usize> {
        match self.outer {
            OuterClosure::Clamped => vec![n - 1],
            OuterClosure::OneSided => vec![],
        }
    }
}

fn lower_bands(half: usize, bc: BoundarySpec) -> usize {
    match bc.outer {
        OuterClosure::Clamped => half,
        OuterClosure::OneSided => 2 * half,
    }
}

/// Positions and matrix columns of the `2 * half + 1` node window of row `i`.
fn window(x: &[f64], i: usize, half: usize, bc: BoundarySpec) -> (Vec<f64>, Vec<usize>) {
    let n = x.len() as isize;
    let outer = x[x.len() - 1];
    let (first, last) = match bc.outer {
        OuterClosure::Clamped => (i as isize - half as isize, i as isize + half as isize),
        OuterClosure::OneSided => {
            let hi = (i as isize + half as isize).min(n - 1);
            (hi - 2 * half as isize, hi)
        }
    };
    let mut pos = Vec::with_capacity(2 * half + 1);
    let mut col = Vec::with_capacity(2 * half + 1);
    for j in first..=last {
        if j < 0 {
            pos.push(-x[(-j) as usize]);
            col.push((-j) as usize);
        } else if j >= n {
            let k = (2 * (n - 1) - j) as usize;
            pos.push(2.0 * outer - x[k]);
            col.push(k);
        } else {
            pos.push(x[j as usize]);
            col.push(j as usize);
        }
    }
    (pos, col)
}

/// Seven-point, third-order discretization of `Δ²_r` in dimension `d`.
pub fn biharmonic_operator(grid: &RadialGrid, d: u32, bc: BoundarySpec) -> Result<BandedOperator> {
    let x = grid.nodes();
    let n = x.len();
    if n < MIN_NODES {
        return Err(Error::TooFewNodes {
            min: MIN_NODES,
            actual: n,
        });
    }
    if d == 0 {
        return Err(Error::InvalidInput("dimension must be at least 1".into()));
    }
    let df = d as f64;
    let mut op = BandedOperator::zeros(n, lower_bands(3, bc), 3);
    let pinned = bc.pinned_rows(n);
    for i in 0..n {
        if pinned.contains(&i) {
            continue;
        }
        let (pos, col) = window(x, i, 3, bc);
        let ri = x[i];
        let shifted: Vec<f64> = pos.iter().map(|p| p - ri).collect();
        let w = fornberg_weights(0.0, &shifted, 4);
        let row: Vec<f64> = if i == 0 {
            let c = df * (df + 2.0) / 3.0;
            w[4].iter().map(|v| c * v).collect()
        } else {
            let a3 = 2.0 * (df - 1.0) / ri;
            let a2 = (df - 1.0) * (df - 3.0) / (ri * ri);
            let a1 = -(df - 1.0) * (df - 3.0) / (ri * ri * ri);
            (0..pos.len())
                .map(|k| w[4][k] + a3 * w[3][k] + a2 * w[2][k] + a1 * w[1][k])
                .collect()
        };
        for (k, &c) in col.iter().enumerate() {
            op.add(i, c, Complex64::new(row[k], 0.0));
        }
    }
    Ok(op)
}

/// Three-point, second-order radial Laplacian `∂²_r + (d-1)/r ∂_r`.
///
/// Uses the same closures as [`biharmonic_operator`]; at the origin
/// `Δψ(0) = d ψ''(0)`. The clamped outer row is kept (the reflected ghost makes
/// it well defined) so that `Δψ` is available at every node.
pub fn laplacian_operator(grid: &RadialGrid, d: u32, bc: BoundarySpec) -> Result<BandedOperator> {
    let x = grid.nodes();
    let n = x.len();
    if n < MIN_NODES {
        return Err(Error::TooFewNodes {
            min: MIN_NODES,
            actual: n,
        });
    }
    let df = d as f64;
    let mut op = BandedOperator::zeros(n, lower_bands(1, bc), 1);
    for i in 0..n {
        let (pos, col) = window(x, i, 1, bc);
        let ri = x[i];
        let shifted: Vec<f64> = pos.iter().map(|p| p - ri).collect();
        let w = fornberg_weights(0.0, &shifted, 2);
        for k in 0..pos.len() {
            let v = if i == 0 {
                df * w[2][k]
            } else {
                w[2][k] + (df - 1.0) / ri * w[1][k]
            };
            op.add(i, col[k], Complex64::new(v, 0.0));
        }
    }
    Ok(op)
}
