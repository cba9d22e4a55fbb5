use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Spatial dimension and nonlinearity exponent of `iψ_t - Δ²ψ + |ψ|^{2σ}ψ = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DimensionParams {
    pub d: u32,
    pub sigma: f64,
}

/// Position of `σd` relative to the critical value 4.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Criticality {
    Subcritical,
    Critical,
    Supercritical,
}

/// Relative tolerance used when deciding `σd == 4`.
pub const CRITICAL_TOLERANCE: f64 = 1e-12;

impl DimensionParams {
    pub fn new(d: u32, sigma: f64) -> Result<Self> {
        if d < 1 {
            return Err(Error::InvalidInput("dimension d must be at least 1".into()));
        }
        if !(sigma > 0.0) || !sigma.is_finite() {
            return Err(Error::InvalidInput("sigma must be positive".into()));
        }
        Ok(Self { d, sigma })
    }

    /// The critical exponent `σ = 4/d`.
    pub fn critical(d: u32) -> Result<Self> {
        Self::new(d, 4.0 / d.max(1) as f64)
    }

    pub fn criticality(&self) -> Criticality {
        let index = self.sigma * self.d as f64;
        if (index - 4.0).abs() <= CRITICAL_TOLERANCE * 4.0 {
            Criticality::Critical
        } else if index < 4.0 {
            Criticality::Subcritical
        } else {
            Criticality::Supercritical
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn criticality_index() {
        assert_eq!(DimensionParams::new(2, 1.0).unwrap().criticality(), Criticality::Subcritical);
        assert_eq!(DimensionParams::new(2, 2.0).unwrap().criticality(), Criticality::Critical);
        assert_eq!(DimensionParams::new(3, 4.0 / 3.0).unwrap().criticality(), Criticality::Critical);
        assert_eq!(DimensionParams::new(2, 4.0).unwrap().criticality(), Criticality::Supercritical);
        assert!(DimensionParams::new(2, 0.0).is_err());
        assert!(DimensionParams::new(0, 1.0).is_err());
    }
}
