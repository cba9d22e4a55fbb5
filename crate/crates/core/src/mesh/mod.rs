//! Non-uniform radial grids: generation by equidistribution of a composite
//! monitor, regrid triggering, and solution transfer between grids.

mod equidistribute;
mod grid;
mod interp;
mod monitor;

pub use equidistribute::equidistribute;
pub use grid::{RadialGrid, MIN_NODES};
pub use interp::{cubic_interpolate, lagrange_interpolate, regrid, regrid_with};
pub use monitor::{
    build_monitor, core_points, needs_regrid, redistribute, resolution_weight, smoothness_weight,
    spacing_weight, MonitorParams, MonitorWeights, Redistribution, RegridPolicy,
};
