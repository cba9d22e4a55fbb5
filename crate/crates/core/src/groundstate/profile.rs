use std::fmt::Write as _;

use crate::error::{Error, Result};

/// Sampling of a ground state.
#[derive(Debug, Clone, PartialEq)]
pub enum GroundStateGrid {
    /// Periodic grid `x_j = -half_width + j h`, `h = 2 half_width / len`.
    Periodic { half_width: f64, len: usize },
    /// Uniform radial grid on `[0, outer]` with `len` nodes.
    Radial { outer: f64, len: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroundStateProfile {
    pub sigma: f64,
    /// Dimension; 1 for the line problem.
    pub d: u32,
    pub grid: GroundStateGrid,
    pub x: Vec<f64>,
    pub values: Vec<f64>,
    /// `‖R‖²` (for radial profiles `∫ R² ρ^{d-1} dρ`).
    pub norm_sq: f64,
    /// L∞ residual of the discretized equation.
    pub residual: f64,
    pub iterations: usize,
}

/// Header pairs, abscissae and values of a profile file.
pub type ProfileText = (Vec<(String, String)>, Vec<f64>, Vec<f64>);

impl GroundStateProfile {
    pub fn peak(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Index of the sample at the centre (`x = 0`).
    pub fn center_index(&self) -> usize {
        match self.grid {
            GroundStateGrid::Periodic { len, .. } => len / 2,
            GroundStateGrid::Radial { .. } => 0,
        }
    }

    /// Value at `x` by cubic Lagrange interpolation on the uniform samples
    /// (even extension for radial profiles); zero outside the domain.
    pub fn interpolate(&self, x: f64) -> f64 {
        let (x0, h, periodic) = match self.grid {
            GroundStateGrid::Periodic { half_width, len } => (-half_width, 2.0 * half_width / len as f64, true),
            GroundStateGrid::Radial { outer, len } => (0.0, outer / (len - 1) as f64, false),
        };
        let x = if periodic { x } else { x.abs() };
        let n = self.values.len() as isize;
        let s = (x - x0) / h;
        let k = s.floor() as isize;
        if k < -1 || k > n {
            return 0.0;
        }
        let sample = |j: isize| -> f64 {
            if periodic {
                self.values[j.rem_euclid(n) as usize]
            } else if j < 0 {
                self.values[(-j) as usize]
            } else if j >= n {
                0.0
            } else {
                self.values[j as usize]
            }
        };
        let t = s - k as f64;
        // Cubic through k-1..k+2.
        let (ym, y0, y1, y2) = (sample(k - 1), sample(k), sample(k + 1), sample(k + 2));
        let c0 = -t * (t - 1.0) * (t - 2.0) / 6.0;
        let c1 = (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0;
        let c2 = -(t + 1.0) * t * (t - 2.0) / 2.0;
        let c3 = (t + 1.0) * t * (t - 1.0) / 6.0;
        c0 * ym + c1 * y0 + c2 * y1 + c3 * y2
    }

    /// `R̃(x) = R(λx)/R(0)` with `λ = R(0)^{-σ/2}`: the solution of the same
    /// equation whose linear coefficient is `λ⁴`, scaled to unit peak.
    pub fn unit_peak_shape(&self, x: f64) -> f64 {
        let r0 = self.values[self.center_index()];
        let lambda = r0.abs().powf(-self.sigma / 2.0);
        self.interpolate(lambda * x) / r0
    }

    /// Header lines (σ, d, norm_sq, residual) and `x R(x)` rows.
    pub fn to_text(&self) -> String {
        let mut s = String::with_capacity(self.values.len() * 48 + 128);
        let _ = writeln!(s, "# sigma: {:.16e}", self.sigma);
        let _ = writeln!(s, "# d: {}", self.d);
        let _ = writeln!(s, "# norm_sq: {:.16e}", self.norm_sq);
        let _ = writeln!(s, "# residual: {:.6e}", self.residual);
        for (x, v) in self.x.iter().zip(&self.values) {
            let _ = writeln!(s, "{x:.16e} {v:.16e}");
        }
        s
    }

    /// Reads `(x, R)` pairs and the header written by [`Self::to_text`].
    pub fn read_text(text: &str) -> Result<ProfileText> {
        let mut header = Vec::new();
        let (mut xs, mut vs) = (Vec::new(), Vec::new());
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
            if let Some(h) = line.strip_prefix('#') {
                if let Some((k, v)) = h.split_once(':') {
                    header.push((k.trim().to_string(), v.trim().to_string()));
                }
                continue;
            }
            let mut it = line.split_whitespace().map(str::parse::<f64>);
            match (it.next(), it.next(), it.next()) {
                (Some(Ok(x)), Some(Ok(v)), None) => {
                    xs.push(x);
                    vs.push(v);
                }
                _ => return Err(Error::InvalidInput(format!("bad profile row {line:?}"))),
            }
        }
        Ok((header, xs, vs))
    }
}
