//! Pointwise measurements of a radial field: peak location, width, rescaled
//! core profile and localized power.

use log::debug;

use crate::discretization::power;
use crate::error::{Error, Result};
use crate::evolution::WaveField;
use crate::mesh::{cubic_interpolate, RadialGrid};

/// Location and height of the amplitude maximum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peak {
    /// Node index of the discrete maximum.
    pub index: usize,
    /// Sub-grid location of the maximum.
    pub r_max: f64,
    /// Sub-grid maximum of `|ψ|`.
    pub amplitude: f64,
    /// The discrete maximum sits on the first or last node.
    pub at_boundary: bool,
}

/// Collapse width `L = (max|ψ|)^{-σ/2}` from the nodal maximum.
pub fn width(field: &WaveField, sigma: f64) -> Result<f64> {
    width_from_amplitude(field.max_amplitude(), sigma)
}

pub fn width_from_amplitude(amplitude: f64, sigma: f64) -> Result<f64> {
    if !(amplitude > 0.0) || !amplitude.is_finite() {
        return Err(Error::InvalidInput(format!(
            "width undefined for peak amplitude {amplitude}"
        )));
    }
    Ok(amplitude.powf(-sigma / 2.0))
}

/// Sub-grid amplitude maximum.
///
/// The discrete maximum is refined by the parabola through it and its two
/// neighbours in `(r, |ψ|²)`. Ties between equal nodal maxima go to the
/// smallest radius. A maximum on the origin node is refined with the mirror
/// node `-r_1`, which places it exactly at `r = 0`.
pub fn peak(field: &WaveField, grid: &RadialGrid) -> Result<Peak> {
    field.check_len(grid.len())?;
    let a2: Vec<f64> = field.values.iter().map(|v| v.norm_sqr()).collect();
    let mut index = 0;
    for (m, &v) in a2.iter().enumerate() {
        if v > a2[index] {
            index = m;
        }
    }
    if !(a2[index] > 0.0) || !a2[index].is_finite() {
        return Err(Error::InvalidInput("peak undefined for a zero or non-finite field".into()));
    }
    if a2.iter().enumerate().any(|(m, &v)| m != index && v == a2[index]) {
        debug!("amplitude maximum tied; taking the smallest radius r = {}", grid.nodes()[index]);
    }
    let x = grid.nodes();
    let n = x.len();
    if index == 0 {
        return Ok(Peak {
            index,
            r_max: 0.0,
            amplitude: a2[0].sqrt(),
            at_boundary: true,
        });
    }
    if index == n - 1 {
        return Ok(Peak {
            index,
            r_max: x[n - 1],
            amplitude: a2[n - 1].sqrt(),
            at_boundary: true,
        });
    }
    let (x0, x1, x2) = (x[index - 1], x[index], x[index + 1]);
    let (y0, y1, y2) = (a2[index - 1], a2[index], a2[index + 1]);
    // Parabola in Newton form about x1.
    let d01 = (y1 - y0) / (x1 - x0);
    let d12 = (y2 - y1) / (x2 - x1);
    let curv = (d12 - d01) / (x2 - x0);
    let (r_max, value) = if curv < 0.0 {
        // y(x) = y1 + b (x - x1) + curv (x - x1)²
        let b = d01 + curv * (x1 - x0);
        let s = (-b / (2.0 * curv)).clamp(x0 - x1, x2 - x1);
        (x1 + s, y1 + b * s + curv * s * s)
    } else {
        (x1, y1)
    };
    Ok(Peak {
        index,
        r_max,
        amplitude: value.max(y1).sqrt(),
        at_boundary: false,
    })
}

/// Ring radius with its boundary flag.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RingRadius {
    pub r_max: f64,
    pub at_boundary: bool,
}

pub fn ring_radius(field: &WaveField, grid: &RadialGrid) -> Result<RingRadius> {
    let p = peak(field, grid)?;
    Ok(RingRadius {
        r_max: p.r_max,
        at_boundary: p.at_boundary,
    })
}

/// Amplitude profile `L^{2/σ} |ψ(r_max + ρL)|` on a uniform `ρ` lattice.
#[derive(Debug, Clone, PartialEq)]
pub struct RescaledProfile {
    pub rho: Vec<f64>,
    pub values: Vec<f64>,
    pub l: f64,
    pub r_max: f64,
    /// Part of the requested window fell outside `[0, R]` and was dropped.
    pub truncated: bool,
}

/// Samples the rescaled amplitude on `samples` uniform points of
/// `[rho_min, rho_max]`.
///
/// `L` is taken from the interpolated amplitude at `r_max`, so the profile
/// equals 1 at `ρ = 0`.
pub fn rescaled_profile(
    field: &WaveField,
    grid: &RadialGrid,
    sigma: f64,
    rho_window: (f64, f64),
    samples: usize,
) -> Result<RescaledProfile> {
    let (lo, hi) = rho_window;
    if !(hi > lo) || samples < 2 {
        return Err(Error::InvalidInput("empty rescaling window".into()));
    }
    let pk = peak(field, grid)?;
    let centre = cubic_interpolate(grid, &field.values, pk.r_max).norm();
    let l = width_from_amplitude(centre, sigma)?;
    let mut rho = Vec::with_capacity(samples);
    let mut values = Vec::with_capacity(samples);
    let mut truncated = false;
    for k in 0..samples {
        let p = lo + (hi - lo) * k as f64 / (samples - 1) as f64;
        let r = pk.r_max + p * l;
        if r < 0.0 || r > grid.outer_radius() {
            truncated = true;
            continue;
        }
        rho.push(p);
        values.push(cubic_interpolate(grid, &field.values, r).norm() / centre);
    }
    Ok(RescaledProfile {
        rho,
        values,
        l,
        r_max: pk.r_max,
        truncated,
    })
}

/// `∫_{r<ε} |ψ|² r^{d-1} dr` by the trapezoid rule, the last partial cell
/// closed with the linearly interpolated integrand.
pub fn power_concentration(field: &WaveField, grid: &RadialGrid, d: u32, eps: f64) -> Result<f64> {
    field.check_len(grid.len())?;
    if !(eps > 0.0) {
        return Err(Error::InvalidInput("eps must be positive".into()));
    }
    let x = grid.nodes();
    if eps >= grid.outer_radius() {
        return Ok(power(field, grid, d));
    }
    let f = |m: usize| field.values[m].norm_sqr() * x[m].powi(d as i32 - 1);
    let mut total = 0.0;
    for m in 0..x.len() - 1 {
        if x[m + 1] <= eps {
            total += 0.5 * (f(m) + f(m + 1)) * (x[m + 1] - x[m]);
        } else {
            let t = (eps - x[m]) / (x[m + 1] - x[m]);
            let fe = f(m) * (1.0 - t) + f(m + 1) * t;
            total += 0.5 * (f(m) + fe) * (eps - x[m]);
            break;
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn real_field(g: &RadialGrid, f: impl Fn(f64) -> f64) -> WaveField {
        WaveField::from_fn(g.nodes(), 0.0, |r| Complex64::new(f(r), 0.0))
    }

    #[test]
    fn width_examples() {
        let g = RadialGrid::uniform(9, 1.0).unwrap();
        let one = real_field(&g, |_| 1.0);
        for sigma in [0.5, 1.0, 4.0] {
            assert_eq!(width(&one, sigma).unwrap(), 1.0);
        }
        let f = real_field(&g, |r| if r == 0.5 { 16.0 } else { 1.0 });
        assert_eq!(width(&f, 4.0).unwrap(), 1.0 / 256.0);
        let f = real_field(&g, |r| if r == 0.5 { 4.0 } else { 1.0 });
        assert!((width(&f, 0.5).unwrap() - 0.5f64.sqrt()).abs() < 1e-15);
        assert!(width(&WaveField::zeros(9), 2.0).is_err());
    }

    #[test]
    fn symmetric_peak_located() {
        let g = RadialGrid::uniform(1001, 10.0).unwrap();
        let f = real_field(&g, |r| (-(r - 5.0) * (r - 5.0)).exp());
        let rr = ring_radius(&f, &g).unwrap();
        assert!((rr.r_max - 5.0).abs() < 1e-6);
        assert!(!rr.at_boundary);
        // Off-node peak.
        let f = real_field(&g, |r| (-(r - 5.0037) * (r - 5.0037)).exp());
        assert!((ring_radius(&f, &g).unwrap().r_max - 5.0037).abs() < 1e-6);
    }

    #[test]
    fn monotone_profile_peaks_at_origin() {
        let g = RadialGrid::uniform(200, 6.0).unwrap();
        let f = real_field(&g, |r| (-r * r).exp());
        let rr = ring_radius(&f, &g).unwrap();
        assert_eq!(rr.r_max, 0.0);
        assert!(rr.at_boundary);
    }

    #[test]
    fn tie_goes_to_smallest_radius() {
        let g = RadialGrid::uniform(1001, 10.0).unwrap();
        let f = real_field(&g, |r| (-(r - 3.0f64).powi(2)).exp() + (-(r - 7.0f64).powi(2)).exp());
        // The sampling is symmetric about r = 5, so both maxima are bitwise equal.
        let a = f.values[300].re;
        let b = f.values[700].re;
        assert_eq!(a, b);
        assert!((ring_radius(&f, &g).unwrap().r_max - 3.0).abs() < 1e-6);
    }

    #[test]
    fn rescaled_peak_is_one() {
        let g = RadialGrid::uniform(2001, 10.0).unwrap();
        let f = real_field(&g, |r| 3.0 * (-(r - 5.01234).powi(2) * 4.0).exp());
        let p = rescaled_profile(&f, &g, 2.0, (-5.0, 5.0), 101).unwrap();
        assert_eq!(p.values[50], 1.0);
        assert!(!p.truncated);
        let p = rescaled_profile(&f, &g, 2.0, (-50.0, 50.0), 101).unwrap();
        assert!(p.truncated);
    }

    #[test]
    fn concentration_limits() {
        let g = RadialGrid::uniform(801, 8.0).unwrap();
        let f = real_field(&g, |r| (-r * r).exp());
        let total = crate::discretization::power(&f, &g, 2);
        assert_eq!(power_concentration(&f, &g, 2, 9.0).unwrap(), total);
        // Bounded integrand: ∫_0^ε r dr ~ ε²/2 for small ε.
        let small = power_concentration(&f, &g, 2, 0.05).unwrap();
        let smaller = power_concentration(&f, &g, 2, 0.025).unwrap();
        assert!((small / smaller - 4.0).abs() < 0.05);
    }
}
