use num_complex::Complex64;

use crate::error::{Error, Result};

/// Complex solution samples on a radial grid at time `time`.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveField {
    pub values: Vec<Complex64>,
    pub time: f64,
}

impl WaveField {
    pub fn new(values: Vec<Complex64>, time: f64) -> Self {
        Self { values, time }
    }

    /// Samples `f` at every node.
    pub fn from_fn(nodes: &[f64], time: f64, f: impl Fn(f64) -> Complex64) -> Self {
        Self {
            values: nodes.iter().map(|&r| f(r)).collect(),
            time,
        }
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            values: vec![Complex64::new(0.0, 0.0); n],
            time: 0.0,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn amplitudes(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.norm()).collect()
    }

    pub fn max_amplitude(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.re.is_finite() && v.im.is_finite())
    }

    pub(crate) fn check_len(&self, n: usize) -> Result<()> {
        if self.values.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                actual: self.values.len(),
            });
        }
        Ok(())
    }
}
