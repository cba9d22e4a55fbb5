//! Ground states of `-Δ²R - R + |R|^{2σ} R = 0` by spectral renormalization.
//!
//! Both solvers iterate the power-normalized fixed point
//!
//! ```text
//! R ← M^γ (I + Δ²)⁻¹ (|R|^{2σ} R),   M = ⟨R, (I + Δ²) R⟩ / ⟨R, |R|^{2σ} R⟩,
//! ```
//!
//! with `γ = (2σ + 1) / (2σ)`, starting from a unit Gaussian.

mod one_d;
mod profile;
mod radial;

pub use one_d::{solve_ground_state_1d, OneDimensionalOptions};
pub use profile::{GroundStateGrid, GroundStateProfile};
pub use radial::{critical_power, solve_ground_state_radial, RadialOptions};

/// Successive iterates closer than this in L∞ count as converged.
pub const CONVERGENCE_TOLERANCE: f64 = 1e-12;

/// Renormalization exponent for the nonlinearity `|R|^{2σ} R`.
pub fn renormalization_exponent(sigma: f64) -> f64 {
    (2.0 * sigma + 1.0) / (2.0 * sigma)
}
