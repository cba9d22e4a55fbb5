use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Log-log slopes below this magnitude count as a constant tail.
pub const TAIL_SLOPE_TOLERANCE: f64 = 0.02;

/// Asymptotic behaviour of `L^q L_t` as the focusing level `1/L` grows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TailClass {
    /// Tends to a negative constant: `L ~ (Tc - t)^{1/(q+1)}` exactly.
    NegativeConstant,
    /// Tends to zero from below: faster than the `1/(q+1)` rate.
    ToZero,
    /// Diverges to minus infinity: slower than the `1/(q+1)` rate.
    ToMinusInfinity,
    /// Too few tail samples, or `L_t` not negative throughout the tail.
    Undetermined,
}

impl fmt::Display for TailClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::NegativeConstant => "negative constant",
            Self::ToZero => "0-",
            Self::ToMinusInfinity => "-infinity",
            Self::Undetermined => "undetermined",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LimitDiagnostic {
    pub q: f64,
    /// Focusing level `1/L` at interior samples.
    pub focusing: Vec<f64>,
    /// `L^q L_t` at the same samples.
    pub values: Vec<f64>,
    pub tail: TailClass,
    /// Slope of `ln|L^q L_t|` against `ln(1/L)` over the last decade.
    pub tail_slope: f64,
    /// Number of samples in the tail regression.
    pub tail_samples: usize,
}

/// Three-point derivative at `x[1]` from unequally spaced samples.
pub fn centered_derivative(x: [f64; 3], y: [f64; 3]) -> f64 {
    let h0 = x[1] - x[0];
    let h1 = x[2] - x[1];
    (-h1 / (h0 * (h0 + h1))) * y[0] + ((h1 - h0) / (h0 * h1)) * y[1] + (h0 / (h1 * (h0 + h1))) * y[2]
}

/// `(1/L, L^q L_t)` at interior samples, `L_t` from three-point non-uniform
/// centred differences, plus a classification of the tail.
pub fn limit_diagnostic(t: &[f64], l: &[f64], q: f64) -> Result<LimitDiagnostic> {
    if t.len() != l.len() {
        return Err(Error::LengthMismatch {
            expected: t.len(),
            actual: l.len(),
        });
    }
    if t.len() < 3 {
        return Err(Error::Fit(format!("limit diagnostic needs 3 samples, got {}", t.len())));
    }
    if t.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Fit("times must be strictly increasing".into()));
    }
    if l.iter().any(|v| !(*v > 0.0) || !v.is_finite()) {
        return Err(Error::Fit("widths must be positive and finite".into()));
    }
    let mut focusing = Vec::with_capacity(t.len() - 2);
    let mut values = Vec::with_capacity(t.len() - 2);
    for k in 1..t.len() - 1 {
        let lt = centered_derivative([t[k - 1], t[k], t[k + 1]], [l[k - 1], l[k], l[k + 1]]);
        focusing.push(1.0 / l[k]);
        values.push(l[k].powf(q) * lt);
    }
    let (tail, tail_slope, tail_samples) = classify_tail(&focusing, &values);
    Ok(LimitDiagnostic {
        q,
        focusing,
        values,
        tail,
        tail_slope,
        tail_samples,
    })
}

/// Classifies by the log-log slope over the samples within one decade of the
/// final focusing level.
pub fn classify_tail(focusing: &[f64], values: &[f64]) -> (TailClass, f64, usize) {
    let Some(&last) = focusing.last() else {
        return (TailClass::Undetermined, f64::NAN, 0);
    };
    let idx: Vec<usize> = (0..focusing.len()).filter(|&k| focusing[k] >= last / 10.0).collect();
    if idx.len() < 3 || idx.iter().any(|&k| !(values[k] < 0.0)) {
        return (TailClass::Undetermined, f64::NAN, idx.len());
    }
    let x: Vec<f64> = idx.iter().map(|&k| focusing[k].ln()).collect();
    let y: Vec<f64> = idx.iter().map(|&k| (-values[k]).ln()).collect();
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    if !(sxx > 0.0) {
        return (TailClass::Undetermined, f64::NAN, idx.len());
    }
    let slope = x.iter().zip(&y).map(|(a, b)| (a - mx) * (b - my)).sum::<f64>() / sxx;
    let class = if slope.abs() < TAIL_SLOPE_TOLERANCE {
        TailClass::NegativeConstant
    } else if slope < 0.0 {
        TailClass::ToZero
    } else {
        TailClass::ToMinusInfinity
    };
    (class, slope, idx.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivative_exact_on_quadratics() {
        let x = [0.1, 0.13, 0.2];
        let y = x.map(|s| 3.0 * s * s - s + 2.0);
        assert!((centered_derivative(x, y) - (6.0 * 0.13 - 1.0)).abs() < 1e-12);
    }

    #[test]
    fn quartic_rate_gives_constant() {
        let kappa: f64 = 0.774;
        let t: Vec<f64> = (0..400).map(|k| 1.0 - 10f64.powf(-1.0 - 7.0 * k as f64 / 399.0)).collect();
        let l: Vec<f64> = t.iter().map(|s| kappa * (1.0 - s).powf(0.25)).collect();
        let d = limit_diagnostic(&t, &l, 3.0).unwrap();
        assert_eq!(d.tail, TailClass::NegativeConstant);
        assert!((d.values[200] + kappa.powi(4) / 4.0).abs() < 1e-4);
    }

    #[test]
    fn too_few_samples_rejected() {
        assert!(limit_diagnostic(&[0.0, 1.0], &[1.0, 0.5], 3.0).is_err());
    }
}
