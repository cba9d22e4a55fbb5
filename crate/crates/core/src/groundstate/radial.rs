use log::debug;
use num_complex::Complex64;

use super::{renormalization_exponent, GroundStateGrid, GroundStateProfile, CONVERGENCE_TOLERANCE};
use crate::discretization::{biharmonic_operator, high_order_quadrature_weights, BandLu, BoundarySpec};
use crate::error::{Error, Result};
use crate::mesh::RadialGrid;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialOptions {
    pub outer_radius: f64,
    /// Number of uniform nodes on `[0, outer_radius]`.
    pub resolution: usize,
    pub max_iterations: usize,
}

impl Default for RadialOptions {
    fn default() -> Self {
        Self {
            outer_radius: 30.0,
            resolution: 601,
            max_iterations: 20_000,
        }
    }
}

/// Iterations without a new smallest change before the floor test applies.
const STAGNATION_ITERATIONS: usize = 1000;
/// Relative change accepted once the iteration stops improving: the band
/// solve with entries of size `h⁻⁴` has a roundoff floor above
/// [`CONVERGENCE_TOLERANCE`] on fine grids.
const ROUNDOFF_FLOOR: f64 = 1e-9;

/// Ground state of `-Δ²_ρ R - R + |R|^{2σ} R = 0` in dimension `d`.
///
/// Same renormalization as the line problem, with the radial biharmonic
/// band operator (even closure at the origin, clamped at the outer radius)
/// and the inner products weighted by `ρ^{d-1}`.
pub fn solve_ground_state_radial(sigma: f64, d: u32, opts: RadialOptions) -> Result<GroundStateProfile> {
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(Error::InvalidInput("sigma must be positive".into()));
    }
    if d == 0 {
        return Err(Error::InvalidInput("dimension must be at least 1".into()));
    }
    let grid = RadialGrid::uniform(opts.resolution, opts.outer_radius)?;
    let n = grid.len();
    let bc = BoundarySpec::default();
    let a = biharmonic_operator(&grid, d, bc)?;
    let pinned = bc.pinned_rows(n);
    let mut m = a.scaled_plus_identity(Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0));
    for &i in &pinned {
        m.set_identity_row(i);
    }
    let lu = BandLu::factor(&m)?;
    let w = high_order_quadrature_weights(&grid, d);
    let gamma = renormalization_exponent(sigma);

    let mut r: Vec<f64> = grid.nodes().iter().map(|x| (-x * x).exp()).collect();
    for &i in &pinned {
        r[i] = 0.0;
    }
    let mut diff = f64::INFINITY;
    let (mut best, mut best_at) = (f64::INFINITY, 0);
    let mut iterations = 0;
    while iterations < opts.max_iterations {
        iterations += 1;
        let nl: Vec<f64> = r.iter().map(|v| v.abs().powf(2.0 * sigma) * v).collect();
        let rc: Vec<Complex64> = r.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        let mr = m.apply(&rc)?;
        let lin: f64 = (0..n).map(|j| w[j] * r[j] * mr[j].re).sum();
        let non: f64 = (0..n).map(|j| w[j] * r[j] * nl[j]).sum();
        if !(non > 0.0) {
            return Err(Error::CollapsedToZero { iterations });
        }
        let factor = (lin / non).powf(gamma);
        let mut rhs: Vec<Complex64> = nl.iter().map(|&v| Complex64::new(factor * v, 0.0)).collect();
        for &i in &pinned {
            rhs[i] = Complex64::new(0.0, 0.0);
        }
        let next = lu.solve(&rhs)?;
        diff = 0.0;
        for j in 0..n {
            diff = f64::max(diff, (next[j].re - r[j]).abs());
            r[j] = next[j].re;
        }
        if !diff.is_finite() {
            return Err(Error::NonFinite {
                context: "ground-state iteration diverged".into(),
            });
        }
        if r.iter().fold(0.0f64, |acc, v| acc.max(v.abs())) < 1e-10 {
            return Err(Error::CollapsedToZero { iterations });
        }
        if diff < CONVERGENCE_TOLERANCE {
            break;
        }
        if diff < best {
            (best, best_at) = (diff, iterations);
        } else if iterations - best_at > STAGNATION_ITERATIONS && best < ROUNDOFF_FLOOR * r[0].abs() {
            debug!("radial ground state stagnated at change {best:e}");
            diff = best;
            break;
        }
    }
    if !(diff < CONVERGENCE_TOLERANCE || diff < ROUNDOFF_FLOOR * r[0].abs()) {
        return Err(Error::NoConvergence {
            iterations,
            residual: diff,
        });
    }
    let rc: Vec<Complex64> = r.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    let ar = a.apply(&rc)?;
    let residual = (0..n)
        .filter(|i| !pinned.contains(i))
        .map(|j| (-ar[j].re - r[j] + r[j].abs().powf(2.0 * sigma) * r[j]).abs())
        .fold(0.0, f64::max);
    let norm_sq: f64 = (0..n).map(|j| w[j] * r[j] * r[j]).sum();
    debug!("radial ground state d = {d}, sigma = {sigma}: {iterations} iterations, norm_sq = {norm_sq}");
    Ok(GroundStateProfile {
        sigma,
        d,
        grid: GroundStateGrid::Radial {
            outer: opts.outer_radius,
            len: n,
        },
        x: grid.nodes().to_vec(),
        values: r,
        norm_sq,
        residual,
        iterations,
    })
}

/// Critical power `‖R_B‖²` for `σ = 4/d`.
pub fn critical_power(d: u32, opts: RadialOptions) -> Result<f64> {
    if d == 0 {
        return Err(Error::InvalidInput("dimension must be at least 1".into()));
    }
    Ok(solve_ground_state_radial(4.0 / d as f64, d, opts)?.norm_sq)
}
