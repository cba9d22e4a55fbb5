//! Banded finite-difference operators and integral functionals on radial grids.

mod banded;
mod biharmonic;
mod fornberg;
mod norms;
mod params;

pub use banded::{solve_banded, BandLu, BandedOperator, PIVOT_TOLERANCE};
pub use biharmonic::{biharmonic_operator, laplacian_operator, BoundarySpec, OuterClosure};
pub use fornberg::fornberg_weights;
pub use norms::{high_order_quadrature_weights, power, quadrature_weights, weighted_norms, Norms};
pub use params::{Criticality, DimensionParams, CRITICAL_TOLERANCE};
