//! Transfer of a solution between grids by local Lagrange interpolation
//! (cubic by default).

use num_complex::Complex64;

use super::RadialGrid;
use crate::error::{Error, Result};
use crate::evolution::WaveField;

/// Value of the local cubic interpolant of `values` at radius `r`.
///
/// The four-node window around the containing cell is shifted inward at the
/// outer end; at the origin the window borrows mirror nodes `-r_k`, which
/// keeps the interpolant even about `r = 0`. Nodes are reproduced exactly.
pub fn cubic_interpolate(grid: &RadialGrid, values: &[Complex64], r: f64) -> Complex64 {
    lagrange_interpolate(grid, values, r, 4)
}

/// Local Lagrange interpolant through `points` nodes (even count, at least 2)
/// centred on the cell containing `r`, with the same window rules as
/// [`cubic_interpolate`].
pub fn lagrange_interpolate(grid: &RadialGrid, values: &[Complex64], r: f64, points: usize) -> Complex64 {
    let x = grid.nodes();
    let n = x.len() as isize;
    let m = grid.locate(r);
    if r == x[m] {
        return values[m];
    }
    if r == x[m + 1] {
        return values[m + 1];
    }
    let half = (points / 2) as isize;
    let s = (m as isize + 1 - half).min(n - points as isize);
    let node = |j: isize| -> (f64, Complex64) {
        if j < 0 {
            (-x[(-j) as usize], values[(-j) as usize])
        } else {
            (x[j as usize], values[j as usize])
        }
    };
    let mut acc = Complex64::new(0.0, 0.0);
    for k in s..s + points as isize {
        let (xk, vk) = node(k);
        let mut w = 1.0;
        for j in s..s + points as isize {
            if j != k {
                let xj = node(j).0;
                w *= (r - xj) / (xk - xj);
            }
        }
        acc += vk * w;
    }
    acc
}

/// Interpolates `field` from `grid_old` onto `grid_new`, real and imaginary
/// parts independently.
pub fn regrid(field: &WaveField, grid_old: &RadialGrid, grid_new: &RadialGrid) -> Result<WaveField> {
    regrid_with(field, grid_old, grid_new, 4)
}

/// [`regrid`] with a `points`-node Lagrange window.
pub fn regrid_with(field: &WaveField, grid_old: &RadialGrid, grid_new: &RadialGrid, points: usize) -> Result<WaveField> {
    if points < 2 || !points.is_multiple_of(2) || points > grid_old.len() {
        return Err(Error::InvalidInput(format!("interpolation window must be even and within the grid, got {points}")));
    }
    field.check_len(grid_old.len())?;
    let (a, b) = (grid_old.outer_radius(), grid_new.outer_radius());
    if (a - b).abs() > 1e-12 * a.abs().max(1.0) {
        return Err(Error::InvalidGrid(format!(
            "grids must share endpoints: outer radius {a} vs {b}"
        )));
    }
    let values: Vec<Complex64> = grid_new
        .nodes()
        .iter()
        .map(|&r| lagrange_interpolate(grid_old, &field.values, r, points))
        .collect();
    let out = WaveField::new(values, field.time);
    if !out.is_finite() {
        return Err(Error::NonFinite {
            context: "regrid interpolation".into(),
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gauss(r: f64) -> Complex64 {
        Complex64::new((-r * r).exp(), 0.5 * (-r * r).exp() * r)
    }

    #[test]
    fn identical_grids_are_bit_identical() {
        let g = RadialGrid::new((0..64).map(|m| (m as f64 / 63.0).powi(2) * 6.0).collect()).unwrap();
        let f = WaveField::from_fn(g.nodes(), 0.3, gauss);
        let out = regrid(&f, &g, &g).unwrap();
        assert_eq!(out, f);
    }

    #[test]
    fn reproduces_cubics_exactly() {
        let g = RadialGrid::new((0..20).map(|m| (m as f64 / 19.0).powf(1.3) * 4.0).collect()).unwrap();
        let p = |r: f64| Complex64::new(1.0 + 0.5 * r * r - 0.1 * r * r * r, r * r);
        let vals: Vec<Complex64> = g.nodes().iter().map(|&r| p(r)).collect();
        for &r in &[0.7, 1.9, 3.3, 3.95] {
            assert!((cubic_interpolate(&g, &vals, r) - p(r)).norm() < 1e-12);
        }
    }

    #[test]
    fn mismatched_endpoints_rejected() {
        let a = RadialGrid::uniform(16, 5.0).unwrap();
        let b = RadialGrid::uniform(16, 6.0).unwrap();
        let f = WaveField::zeros(16);
        assert!(matches!(regrid(&f, &a, &b), Err(Error::InvalidGrid(_))));
    }
}
