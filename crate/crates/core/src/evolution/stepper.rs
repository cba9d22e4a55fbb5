use num_complex::Complex64;

use crate::discretization::{biharmonic_operator, BandLu, BandedOperator, BoundarySpec, DimensionParams};
use crate::error::{Error, Result};
use crate::mesh::RadialGrid;

use super::{CorrectorForm, WaveField};

/// Smallest time step handed out by [`choose_dt`].
pub const DT_FLOOR: f64 = 1e-16;

/// `dt = c_dt · L⁴`, clamped to `[1e-16, dt_max]`.
pub fn choose_dt(l: f64, c_dt: f64, dt_max: f64) -> f64 {
    (c_dt * l.powi(4)).clamp(DT_FLOOR, dt_max.max(DT_FLOOR))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepOptions {
    pub correctors: usize,
    pub form: CorrectorForm,
}

impl Default for StepOptions {
    fn default() -> Self {
        Self {
            correctors: 2,
            form: CorrectorForm::default(),
        }
    }
}

/// Crank-Nicolson predictor-corrector integrator on a fixed grid.
///
/// The biharmonic operator is assembled once per grid; the implicit matrices
/// depend on `dt` (and on the frozen potential for
/// [`CorrectorForm::Potential`]) and are refactored per solve.
#[derive(Debug, Clone)]
pub struct Integrator {
    dims: DimensionParams,
    op: BandedOperator,
    pinned: Vec<usize>,
    opts: StepOptions,
}

impl Integrator {
    pub fn new(grid: &RadialGrid, dims: DimensionParams, opts: StepOptions) -> Result<Self> {
        let bc = BoundarySpec::default();
        let op = biharmonic_operator(grid, dims.d, bc)?;
        Ok(Self {
            dims,
            op,
            pinned: bc.pinned_rows(grid.len()),
            opts,
        })
    }

    pub fn operator(&self) -> &BandedOperator {
        &self.op
    }

    /// `(I + i c (A - V))`, with pinned rows replaced by identity rows.
    fn implicit_matrix(&self, c: f64, potential: Option<&[f64]>) -> BandedOperator {
        let mut m = self.op.scaled_plus_identity(Complex64::new(0.0, c), Complex64::new(1.0, 0.0));
        if let Some(v) = potential {
            let diag: Vec<Complex64> = v.iter().map(|v| Complex64::new(0.0, -c * v)).collect();
            m.add_diagonal(&diag);
        }
        for &i in &self.pinned {
            m.set_identity_row(i);
        }
        m
    }

    /// `(I - i c (A - V)) ψ`.
    fn explicit_apply(&self, c: f64, potential: Option<&[f64]>, psi: &[Complex64]) -> Result<Vec<Complex64>> {
        let a = self.op.apply(psi)?;
        let ic = Complex64::new(0.0, c);
        Ok(psi
            .iter()
            .zip(&a)
            .enumerate()
            .map(|(m, (p, ap))| {
                let v = potential.map_or(0.0, |v| v[m]);
                p - ic * (ap - v * p)
            })
            .collect())
    }

    fn potential(&self, psi: &[Complex64]) -> Vec<f64> {
        let s = self.dims.sigma;
        psi.iter().map(|v| v.norm_sqr().powf(s)).collect()
    }

    fn zero_pinned(&self, v: &mut [Complex64]) {
        for &i in &self.pinned {
            v[i] = Complex64::new(0.0, 0.0);
        }
    }

    /// Advances `field` by `dt` (either sign).
    pub fn step(&self, field: &WaveField, dt: f64) -> Result<WaveField> {
        if !dt.is_finite() || dt == 0.0 {
            return Err(Error::InvalidInput(format!("time step must be finite and nonzero, got {dt}")));
        }
        field.check_len(self.op.size())?;
        let tau = 0.5 * dt;
        let psi0 = &field.values;
        let idt = Complex64::new(0.0, dt);

        // Predictor with the nonlinearity at the old level.
        let base = self.explicit_apply(tau, None, psi0)?;
        let lu = BandLu::factor(&self.implicit_matrix(tau, None))?;
        let v0 = self.potential(psi0);
        let mut rhs: Vec<Complex64> = base
            .iter()
            .zip(psi0)
            .zip(&v0)
            .map(|((b, p), v)| b + idt * (v * p))
            .collect();
        self.zero_pinned(&mut rhs);
        let mut star = lu.solve(&rhs)?;
        check_finite(&star)?;

        for _ in 0..self.opts.correctors {
            let avg: Vec<Complex64> = psi0.iter().zip(&star).map(|(a, b)| 0.5 * (a + b)).collect();
            let v = self.potential(&avg);
            star = match self.opts.form {
                CorrectorForm::Explicit => {
                    let mut rhs: Vec<Complex64> = base
                        .iter()
                        .zip(&avg)
                        .zip(&v)
                        .map(|((b, p), v)| b + idt * (v * p))
                        .collect();
                    self.zero_pinned(&mut rhs);
                    lu.solve(&rhs)?
                }
                CorrectorForm::Potential => {
                    let mut rhs = self.explicit_apply(tau, Some(&v), psi0)?;
                    self.zero_pinned(&mut rhs);
                    BandLu::factor(&self.implicit_matrix(tau, Some(&v)))?.solve(&rhs)?
                }
            };
            check_finite(&star)?;
        }
        Ok(WaveField::new(star, field.time + dt))
    }
}

fn check_finite(v: &[Complex64]) -> Result<()> {
    if v.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite {
            context: "time step produced non-finite values: blowup reached or dt too large".into(),
        })
    }
}

/// One predictor-corrector step on `grid`, assembling the operator on the fly.
pub fn step(field: &WaveField, grid: &RadialGrid, dt: f64, dims: DimensionParams, opts: StepOptions) -> Result<WaveField> {
    Integrator::new(grid, dims, opts)?.step(field, dt)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discretization::power;

    #[test]
    fn dt_law() {
        assert!((choose_dt(1.0, 0.1, 1.0) - 0.1).abs() < 1e-16);
        assert!((choose_dt(1e-2, 0.1, 1.0) - 1e-9).abs() < 1e-22);
        assert!((choose_dt(0.5, 0.1, 1.0) * 16.0 - choose_dt(1.0, 0.1, 1.0)).abs() < 1e-15);
        assert_eq!(choose_dt(1e-6, 0.05, 1.0), DT_FLOOR);
        assert_eq!(choose_dt(10.0, 0.05, 1e-3), 1e-3);
    }

    #[test]
    fn zero_field_is_fixed() {
        let g = RadialGrid::uniform(64, 8.0).unwrap();
        let dims = DimensionParams::new(2, 4.0).unwrap();
        let out = step(&WaveField::zeros(64), &g, 0.01, dims, StepOptions::default()).unwrap();
        assert!(out.values.iter().all(|v| v.norm() == 0.0));
        assert_eq!(out.time, 0.01);
    }

    #[test]
    fn small_amplitude_step_keeps_power_roughly() {
        let g = RadialGrid::uniform(400, 12.0).unwrap();
        let dims = DimensionParams::new(2, 2.0).unwrap();
        let f = WaveField::from_fn(g.nodes(), 0.0, |r| Complex64::new(1e-3 * (-(r - 5.0) * (r - 5.0)).exp(), 0.0));
        let out = step(&f, &g, 1e-3, dims, StepOptions::default()).unwrap();
        let (p0, p1) = (power(&f, &g, 2), power(&out, &g, 2));
        assert!(((p1 - p0) / p0).abs() < 1e-6);
    }
}
