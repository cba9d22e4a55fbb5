//! Simulation and analysis of ring-type blowup in the radial biharmonic
//! nonlinear Schrödinger equation
//!
//! ```text
//! iψ_t - Δ²_r ψ + |ψ|^{2σ} ψ = 0,   r ∈ [0, R].
//! ```

// Negated comparisons double as NaN guards; index loops mirror the stencil algebra.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod diagnostics;
pub mod discretization;
pub mod error;
pub mod evolution;
pub mod groundstate;
pub mod harness;
pub mod mesh;

pub use discretization::{DimensionParams, Criticality};
pub use error::{Error, Result};
pub use evolution::{run, SimConfig, WaveField};
pub use mesh::RadialGrid;
