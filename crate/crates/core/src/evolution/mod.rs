//! Time integration of `iψ_t - Δ²_r ψ + |ψ|^{2σ} ψ = 0` with adaptive regridding.

mod config;
mod field;
mod run;
mod stepper;

pub use config::{
    CorrectorForm, GridConfig, OutputConfig, PhysicsConfig, RegridConfig, SimConfig, SteppingConfig, StoppingConfig,
};
pub use field::WaveField;
pub use run::{initial_grid, run, NoObserver, RunObserver, RunOutcome, RunStatus, SimulationState, Snapshot};
pub use stepper::{choose_dt, step, Integrator, StepOptions, DT_FLOOR};
