//! Power-law fits for the blowup rate `L ~ κ (Tc - t)^p` and the shrink rate
//! `r_max ~ r₀ L^α`.

use std::fmt::Write as _;
use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Minimum number of samples in a fit window.
pub const MIN_FIT_SAMPLES: usize = 10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    /// `κ` for blowup-rate fits, `r₀` for shrink-rate fits.
    pub coefficient: f64,
    /// `p` or `α`.
    pub exponent: f64,
    /// Fitted singular time; `None` for fits that are not in `t`.
    pub tc_estimate: Option<f64>,
    /// Root-mean-square residual of the log-log regression.
    pub rms_log_residual: f64,
    /// Sample indices used, half open.
    pub window: (usize, usize),
    /// The `Tc` search ended on its bracket, so the estimate is unreliable.
    pub tc_at_bound: bool,
}

impl FitResult {
    pub fn samples(&self) -> usize {
        self.window.1 - self.window.0
    }

    /// `key: value` report.
    pub fn to_report(&self, label: &str) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "fit: {label}");
        let _ = writeln!(s, "coefficient: {:.10e}", self.coefficient);
        let _ = writeln!(s, "exponent: {:.10}", self.exponent);
        match self.tc_estimate {
            Some(tc) => {
                let _ = writeln!(s, "tc_estimate: {tc:.16e}");
            }
            None => {
                let _ = writeln!(s, "tc_estimate: none");
            }
        }
        let _ = writeln!(s, "rms_log_residual: {:.6e}", self.rms_log_residual);
        let _ = writeln!(s, "window_start: {}", self.window.0);
        let _ = writeln!(s, "window_end: {}", self.window.1);
        let _ = writeln!(s, "samples: {}", self.samples());
        let _ = writeln!(s, "tc_at_bound: {}", self.tc_at_bound);
        s
    }
}

struct Line {
    slope: f64,
    intercept: f64,
    rms: f64,
}

fn least_squares(x: &[f64], y: &[f64]) -> Line {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxx, mut sxy) = (0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        sxx += (a - mx) * (a - mx);
        sxy += (a - mx) * (b - my);
    }
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let intercept = my - slope * mx;
    let ss: f64 = x
        .iter()
        .zip(y)
        .map(|(a, b)| {
            let r = b - (intercept + slope * a);
            r * r
        })
        .sum();
    Line {
        slope,
        intercept,
        rms: (ss / n).sqrt(),
    }
}

fn check_window(len: usize, window: &Range<usize>) -> Result<()> {
    if window.end > len || window.start >= window.end {
        return Err(Error::Fit(format!(
            "window {}..{} outside series of length {len}",
            window.start, window.end
        )));
    }
    if window.len() < MIN_FIT_SAMPLES {
        return Err(Error::Fit(format!(
            "window has {} samples, need at least {MIN_FIT_SAMPLES}",
            window.len()
        )));
    }
    Ok(())
}

/// Fits `y ≈ κ (Tc - t)^p` on `window`.
///
/// For a trial `Tc` the pair `(ln κ, p)` is a linear regression of `ln y` on
/// `ln(Tc - t)`. `Tc` itself minimizes the rms log-residual, searched over
/// `u = ln(Tc - t_last)`: a coarse scan brackets the minimum and golden-section
/// search refines it.
pub fn fit_power_law(t: &[f64], y: &[f64], window: Range<usize>) -> Result<FitResult> {
    if t.len() != y.len() {
        return Err(Error::LengthMismatch {
            expected: t.len(),
            actual: y.len(),
        });
    }
    check_window(t.len(), &window)?;
    let tw = &t[window.clone()];
    let yw = &y[window.clone()];
    for k in 0..tw.len() {
        if !(yw[k] > 0.0) || !yw[k].is_finite() || !tw[k].is_finite() {
            return Err(Error::Fit(format!("non-positive or non-finite sample at {}", window.start + k)));
        }
        if k > 0 && !(tw[k] > tw[k - 1]) {
            return Err(Error::Fit(format!("times not increasing at {}", window.start + k)));
        }
        if k > 0 && !(yw[k] < yw[k - 1]) {
            return Err(Error::Fit(format!(
                "series not decreasing at {} ({} -> {})",
                window.start + k,
                yw[k - 1],
                yw[k]
            )));
        }
    }
    let t_last = *tw.last().unwrap();
    let span = t_last - tw[0];
    let ly: Vec<f64> = yw.iter().map(|v| v.ln()).collect();
    let objective = |u: f64| -> (Line, f64) {
        let tc = t_last + u.exp();
        let lx: Vec<f64> = tw.iter().map(|s| (tc - s).ln()).collect();
        let line = least_squares(&lx, &ly);
        (line, tc)
    };

    let lo = (span * 1e-14).max(t_last.abs() * 1e-15 + f64::MIN_POSITIVE).ln();
    let hi = (span * 1e3).ln();
    const SCAN: usize = 240;
    let grid_u = |k: usize| lo + (hi - lo) * k as f64 / SCAN as f64;
    let mut best = 0;
    let mut best_val = f64::INFINITY;
    for k in 0..=SCAN {
        let v = objective(grid_u(k)).0.rms;
        if v < best_val {
            best_val = v;
            best = k;
        }
    }
    let mut a = grid_u(best.saturating_sub(1));
    let mut b = grid_u((best + 1).min(SCAN));
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let mut fc = objective(c).0.rms;
    let mut fd = objective(d).0.rms;
    for _ in 0..200 {
        if (b - a).abs() < 1e-13 * (1.0 + a.abs()) {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = objective(c).0.rms;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = objective(d).0.rms;
        }
    }
    let u = 0.5 * (a + b);
    let (line, tc) = objective(u);
    let tc_at_bound = best == 0 || best == SCAN;
    Ok(FitResult {
        coefficient: line.intercept.exp(),
        exponent: line.slope,
        tc_estimate: Some(tc),
        rms_log_residual: line.rms,
        window: (window.start, window.end),
        tc_at_bound,
    })
}

/// Fits `r_max ≈ r₀ L^α` on `window` by linear least squares in log-log.
pub fn fit_shrink_rate(l: &[f64], r_max: &[f64], window: Range<usize>) -> Result<FitResult> {
    if l.len() != r_max.len() {
        return Err(Error::LengthMismatch {
            expected: l.len(),
            actual: r_max.len(),
        });
    }
    check_window(l.len(), &window)?;
    let mut lx = Vec::with_capacity(window.len());
    let mut ly = Vec::with_capacity(window.len());
    for k in window.clone() {
        if !(l[k] > 0.0) || !(r_max[k] > 0.0) || !l[k].is_finite() || !r_max[k].is_finite() {
            return Err(Error::Fit(format!("non-positive or non-finite sample at {k}")));
        }
        lx.push(l[k].ln());
        ly.push(r_max[k].ln());
    }
    let line = least_squares(&lx, &ly);
    Ok(FitResult {
        coefficient: line.intercept.exp(),
        exponent: line.slope,
        tc_estimate: None,
        rms_log_residual: line.rms,
        window: (window.start, window.end),
        tc_at_bound: false,
    })
}

/// Default fit window on a decreasing width series: the samples whose
/// focusing level `1/L` lies within `decades` decades of the final one,
/// dropping the last `exclude_fraction` of those samples.
///
/// Returns `None` when fewer than [`MIN_FIT_SAMPLES`] samples remain.
pub fn focusing_window(l: &[f64], decades: f64, exclude_fraction: f64) -> Option<Range<usize>> {
    let last = *l.last()?;
    let floor = last * 10f64.powf(decades);
    let start = l.iter().rposition(|&v| v > floor).map_or(0, |k| k + 1);
    let len = l.len() - start;
    let drop = (len as f64 * exclude_fraction).ceil() as usize;
    let end = l.len() - drop.min(len);
    (end.saturating_sub(start) >= MIN_FIT_SAMPLES).then_some(start..end)
}

/// Indices of a sub-series that keeps a sample each time the width has
/// dropped by at least the factor `ratio` (< 1) below the last kept sample.
/// The result is strictly decreasing in `l` and always contains index 0.
pub fn thin_by_focusing(l: &[f64], ratio: f64) -> Vec<usize> {
    let mut keep = Vec::new();
    if l.is_empty() {
        return keep;
    }
    keep.push(0);
    let mut current = l[0];
    for (k, &v) in l.iter().enumerate().skip(1) {
        if v <= current * ratio {
            keep.push(k);
            current = v;
        }
    }
    keep
}

#[cfg(test)]
mod tests {
    use super::*;

    fn synthetic(kappa: f64, p: f64, tc: f64, n: usize) -> (Vec<f64>, Vec<f64>) {
        // Geometric spacing in Tc - t from 0.1 down to 1e-8.
        let t: Vec<f64> = (0..n)
            .map(|k| tc - 0.1 * 10f64.powf(-7.0 * k as f64 / (n - 1) as f64))
            .collect();
        let y = t.iter().map(|s| kappa * (tc - s).powf(p)).collect();
        (t, y)
    }

    #[test]
    fn exact_power_law_recovered() {
        let (t, y) = synthetic(0.774, 0.25, 1.0, 200);
        let f = fit_power_law(&t, &y, 0..200).unwrap();
        assert!((f.exponent - 0.25).abs() < 1e-10, "{f:?}");
        assert!(f.rms_log_residual < 1e-12);
        assert!((f.tc_estimate.unwrap() - 1.0).abs() < 1e-12);
        assert!(!f.tc_at_bound);
    }

    #[test]
    fn rejects_short_and_non_monotone_windows() {
        let (t, mut y) = synthetic(1.0, 0.3, 1.0, 40);
        assert!(fit_power_law(&t, &y, 0..9).is_err());
        y[20] = y[19] * 1.01;
        assert!(matches!(fit_power_law(&t, &y, 0..40), Err(Error::Fit(_))));
        assert!(fit_power_law(&t, &y, 21..40).is_ok());
    }

    #[test]
    fn shrink_rate_trivial_cases() {
        let l: Vec<f64> = (0..30).map(|k| 10f64.powf(-0.1 * k as f64)).collect();
        let flat = vec![3.0; 30];
        let f = fit_shrink_rate(&l, &flat, 0..30).unwrap();
        assert!(f.exponent.abs() < 1e-12);
        let prop: Vec<f64> = l.iter().map(|v| 2.0 * v).collect();
        let f = fit_shrink_rate(&l, &prop, 0..30).unwrap();
        assert!((f.exponent - 1.0).abs() < 1e-12);
        assert!((f.coefficient - 2.0).abs() < 1e-12);
    }

    #[test]
    fn window_selection() {
        let l: Vec<f64> = (0..=40).map(|k| 10f64.powf(-0.1 * k as f64)).collect();
        // Within 1.45 decades of 1e-4: indices 26..=40.
        let w = focusing_window(&l, 1.45, 0.0).unwrap();
        assert_eq!(w, 26..41);
        let w = focusing_window(&l, 1.45, 0.1).unwrap();
        assert_eq!(w, 26..39);
        assert!(focusing_window(&l[..5], 1.5, 0.0).is_none());
    }

    #[test]
    fn thinning_is_strictly_decreasing() {
        let l = [1.0, 0.995, 0.98, 0.985, 0.97, 0.5, 0.49, 0.2];
        let keep = thin_by_focusing(&l, 0.99);
        assert_eq!(keep, vec![0, 2, 4, 5, 6, 7]);
    }

    #[test]
    fn report_has_keys() {
        let (t, y) = synthetic(1.0, 0.3, 1.0, 20);
        let r = fit_power_law(&t, &y, 0..20).unwrap().to_report("L(t)");
        for key in ["exponent:", "coefficient:", "rms_log_residual:", "window_start:", "tc_estimate:"] {
            assert!(r.contains(key), "{r}");
        }
    }
}
