use log::debug;
use num_complex::Complex64;
use rustfft::FftPlanner;

use super::{renormalization_exponent, GroundStateGrid, GroundStateProfile, CONVERGENCE_TOLERANCE};
use crate::discretization::fornberg_weights;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OneDimensionalOptions {
    pub half_width: f64,
    /// Number of periodic samples (a power of two is fastest).
    pub resolution: usize,
    pub max_iterations: usize,
}

impl Default for OneDimensionalOptions {
    fn default() -> Self {
        Self {
            half_width: 40.0,
            resolution: 1024,
            max_iterations: 20_000,
        }
    }
}

/// Half-width of the finite-difference stencil used for the residual.
const RESIDUAL_HALF_STENCIL: usize = 10;

/// Ground state of `-R'''' - R + |R|^{2σ} R = 0` on the line.
///
/// Spectral renormalization with symbol `(1 + k⁴)⁻¹` on a periodic box. The
/// reported residual comes from a 21-point finite-difference fourth
/// derivative, independent of the spectral solve.
pub fn solve_ground_state_1d(sigma: f64, opts: OneDimensionalOptions) -> Result<GroundStateProfile> {
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(Error::InvalidInput("sigma must be positive".into()));
    }
    let m = opts.resolution;
    if m < 2 * RESIDUAL_HALF_STENCIL + 2 || !(opts.half_width > 0.0) {
        return Err(Error::InvalidInput("ground-state grid too small".into()));
    }
    let h = 2.0 * opts.half_width / m as f64;
    let x: Vec<f64> = (0..m).map(|j| -opts.half_width + j as f64 * h).collect();
    let dk = std::f64::consts::PI / opts.half_width;
    let symbol: Vec<f64> = (0..m)
        .map(|j| {
            let k = if j <= m / 2 { j as f64 } else { j as f64 - m as f64 } * dk;
            1.0 + k.powi(4)
        })
        .collect();
    let mut planner = FftPlanner::<f64>::new();
    let fwd = planner.plan_fft_forward(m);
    let inv = planner.plan_fft_inverse(m);
    let gamma = renormalization_exponent(sigma);

    let mut r: Vec<f64> = x.iter().map(|x| (-x * x).exp()).collect();
    let mut buf_r = vec![Complex64::new(0.0, 0.0); m];
    let mut buf_n = vec![Complex64::new(0.0, 0.0); m];
    let mut diff = f64::INFINITY;
    let mut iterations = 0;
    while iterations < opts.max_iterations {
        iterations += 1;
        for j in 0..m {
            buf_r[j] = Complex64::new(r[j], 0.0);
            buf_n[j] = Complex64::new(r[j].abs().powf(2.0 * sigma) * r[j], 0.0);
        }
        fwd.process(&mut buf_r);
        fwd.process(&mut buf_n);
        let mut lin = 0.0;
        let mut non = 0.0;
        for j in 0..m {
            lin += symbol[j] * buf_r[j].norm_sqr();
            non += (buf_r[j].conj() * buf_n[j]).re;
        }
        if !(non > 0.0) {
            return Err(Error::CollapsedToZero { iterations });
        }
        let factor = (lin / non).powf(gamma) / m as f64;
        for j in 0..m {
            buf_n[j] *= factor / symbol[j];
        }
        inv.process(&mut buf_n);
        diff = 0.0;
        for j in 0..m {
            let v = buf_n[j].re;
            diff = f64::max(diff, (v - r[j]).abs());
            r[j] = v;
        }
        if !diff.is_finite() {
            return Err(Error::NonFinite {
                context: "ground-state iteration diverged".into(),
            });
        }
        if r.iter().fold(0.0f64, |a, v| a.max(v.abs())) < 1e-10 {
            return Err(Error::CollapsedToZero { iterations });
        }
        if diff < CONVERGENCE_TOLERANCE {
            break;
        }
    }
    if !(diff < CONVERGENCE_TOLERANCE) {
        return Err(Error::NoConvergence {
            iterations,
            residual: diff,
        });
    }
    // Enforce exact evenness about x = 0 (index m/2).
    for j in 1..m / 2 {
        let avg = 0.5 * (r[m / 2 + j] + r[m / 2 - j]);
        r[m / 2 + j] = avg;
        r[m / 2 - j] = avg;
    }
    let residual = fd_residual(&r, h, sigma);
    let norm_sq = r.iter().map(|v| v * v).sum::<f64>() * h;
    debug!("1d ground state sigma = {sigma}: {iterations} iterations, norm_sq = {norm_sq}, residual = {residual:e}");
    Ok(GroundStateProfile {
        sigma,
        d: 1,
        grid: GroundStateGrid::Periodic {
            half_width: opts.half_width,
            len: m,
        },
        x,
        values: r,
        norm_sq,
        residual,
        iterations,
    })
}

/// `max |-R'''' - R + |R|^{2σ} R|` with a periodic 21-point stencil.
pub(crate) fn fd_residual(r: &[f64], h: f64, sigma: f64) -> f64 {
    let m = r.len() as isize;
    let half = RESIDUAL_HALF_STENCIL as isize;
    let offsets: Vec<f64> = (-half..=half).map(|k| k as f64 * h).collect();
    let w = fornberg_weights(0.0, &offsets, 4);
    let mut worst = 0.0f64;
    for j in 0..m {
        let d4: f64 = (-half..=half)
            .zip(&w[4])
            .map(|(k, c)| c * r[(j + k).rem_euclid(m) as usize])
            .sum();
        let v = r[j as usize];
        worst = worst.max((-d4 - v + v.abs().powf(2.0 * sigma) * v).abs());
    }
    worst
}
