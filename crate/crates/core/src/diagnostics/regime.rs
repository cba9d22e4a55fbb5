use std::fmt;

use serde::{Deserialize, Serialize};

use crate::discretization::CRITICAL_TOLERANCE;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegimeKind {
    /// `σd < 4`: solutions exist globally.
    Subcritical,
    /// `σd = 4`: ring collapses with `r_max ∝ L`.
    CriticalEqualRate,
    /// `4/d < σ < 4`: ring shrinks as `L^{α_B}`, `0 < α_B < 1`.
    ShrinkingRing,
    /// `σ = 4`: standing ring, blowup rate slightly above 1/4.
    StandingRingCriticalExponent,
    /// `σ > 4`: standing ring with rate 1/4.
    StandingRingSupercritical,
}

impl fmt::Display for RegimeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Subcritical => "subcritical",
            Self::CriticalEqualRate => "critical_equal_rate",
            Self::ShrinkingRing => "shrinking_ring",
            Self::StandingRingCriticalExponent => "standing_ring_critical_exponent",
            Self::StandingRingSupercritical => "standing_ring_supercritical",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegimeLabel {
    pub kind: RegimeKind,
    /// Predicted shrink rate; 0 for standing rings.
    pub alpha_b: f64,
    /// Predicted blowup rate `1/(3 + α_B)`.
    pub p_pred: f64,
    pub note: Option<String>,
}

/// Predicted shrink rate `α_B = (4 - σ) / (σ (d - 1))`, zero for `σ ≥ 4`.
pub fn alpha_b(sigma: f64, d: u32) -> f64 {
    if sigma >= 4.0 {
        0.0
    } else {
        ((4.0 - sigma) / (sigma * (d as f64 - 1.0))).max(0.0)
    }
}

pub fn classify_regime(sigma: f64, d: u32) -> Result<RegimeLabel> {
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(Error::InvalidInput("sigma must be positive".into()));
    }
    if d < 2 {
        return Err(Error::InvalidInput(format!(
            "ring classification undefined for d = {d}"
        )));
    }
    let sd = sigma * d as f64;
    let a = alpha_b(sigma, d);
    let p = 1.0 / (3.0 + a);
    let (kind, note) = if sd < 4.0 - CRITICAL_TOLERANCE {
        (RegimeKind::Subcritical, Some("global existence".to_string()))
    } else if (sd - 4.0).abs() <= CRITICAL_TOLERANCE {
        (RegimeKind::CriticalEqualRate, None)
    } else if (sigma - 4.0).abs() <= CRITICAL_TOLERANCE {
        (
            RegimeKind::StandingRingCriticalExponent,
            Some("blowup rate slightly above 1/4".to_string()),
        )
    } else if sigma > 4.0 {
        (RegimeKind::StandingRingSupercritical, None)
    } else {
        (RegimeKind::ShrinkingRing, None)
    };
    // Equal-rate collapse has α_B = 1 exactly.
    let (a, p) = match kind {
        RegimeKind::CriticalEqualRate => (1.0, 0.25),
        RegimeKind::StandingRingCriticalExponent | RegimeKind::StandingRingSupercritical => (0.0, 0.25),
        _ => (a, p),
    };
    Ok(RegimeLabel {
        kind,
        alpha_b: a,
        p_pred: p,
        note,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shrinking_ring_example() {
        let r = classify_regime(8.0 / 3.0, 2).unwrap();
        assert_eq!(r.kind, RegimeKind::ShrinkingRing);
        assert!((r.alpha_b - 0.5).abs() < 1e-14);
        assert!((r.p_pred - 1.0 / 3.5).abs() < 1e-14);
    }

    #[test]
    fn other_labels() {
        assert_eq!(classify_regime(4.0, 3).unwrap().kind, RegimeKind::StandingRingCriticalExponent);
        assert_eq!(classify_regime(4.0, 3).unwrap().alpha_b, 0.0);
        assert_eq!(classify_regime(1.0, 2).unwrap().kind, RegimeKind::Subcritical);
        let c = classify_regime(2.0, 2).unwrap();
        assert_eq!(c.kind, RegimeKind::CriticalEqualRate);
        assert_eq!((c.alpha_b, c.p_pred), (1.0, 0.25));
        assert_eq!(classify_regime(5.0, 2).unwrap().kind, RegimeKind::StandingRingSupercritical);
        assert!(classify_regime(4.0, 1).is_err());
        assert!(classify_regime(0.0, 2).is_err());
    }
}
