//! Collapse diagnostics: width and ring radius, rescaled profiles, rate fits,
//! limit diagnostics and the regime classification.

mod fit;
mod limit;
mod profile;
mod regime;
mod series;

pub use fit::{fit_power_law, fit_shrink_rate, focusing_window, thin_by_focusing, FitResult, MIN_FIT_SAMPLES};
pub use limit::{centered_derivative, classify_tail, limit_diagnostic, LimitDiagnostic, TailClass, TAIL_SLOPE_TOLERANCE};
pub use profile::{
    peak, power_concentration, rescaled_profile, ring_radius, width, width_from_amplitude, Peak, RescaledProfile,
    RingRadius,
};
pub use regime::{alpha_b, classify_regime, RegimeKind, RegimeLabel};
pub use series::{DiagnosticRecord, DiagnosticsSeries, RegridEvent};
