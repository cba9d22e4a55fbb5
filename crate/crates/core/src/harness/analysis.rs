use std::fmt::Write as _;

use crate::diagnostics::{
    classify_regime, fit_power_law, fit_shrink_rate, focusing_window, limit_diagnostic, rescaled_profile,
    thin_by_focusing, DiagnosticsSeries, FitResult, LimitDiagnostic, RegimeLabel,
};
use crate::error::Result;
use crate::evolution::Snapshot;
use crate::groundstate::GroundStateProfile;

/// Fit-window and thinning settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalysisOptions {
    /// Decades of focusing covered by the fit window.
    pub decades: f64,
    /// Share of the final samples left out of the window.
    pub exclude_fraction: f64,
    /// Samples are thinned to one per factor `ratio` in `L`.
    pub thin_ratio: f64,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        Self {
            decades: 1.5,
            exclude_fraction: 0.02,
            thin_ratio: 0.955,
        }
    }
}

/// Everything derived from a diagnostics series after the run.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub regime: Option<RegimeLabel>,
    pub blowup: Option<FitResult>,
    pub shrink: Option<FitResult>,
    pub limit: Option<LimitDiagnostic>,
    /// `L(0) / min L`.
    pub focusing: f64,
    pub max_power_drift: f64,
    pub max_hamiltonian_drift: f64,
    pub max_regrid_power_jump: f64,
    /// Relative change of `r_max` between the last sample and the first
    /// sample with `L ≤ 10 L_end`.
    pub rmax_change_last_decade: Option<f64>,
    /// Reasons for missing pieces.
    pub notes: Vec<String>,
    /// Thinned samples `(t, L, r_max)` the fits were made on.
    pub thinned: Vec<(f64, f64, f64)>,
}

impl Analysis {
    /// Exponent `q` of the limit diagnostic `L^q L_t`, `1/p_pred - 1`.
    pub fn tail_exponent(&self) -> Option<f64> {
        self.regime.as_ref().map(|r| 1.0 / r.p_pred - 1.0)
    }

    /// `key: value` report of the limit diagnostic.
    pub fn limit_report(&self) -> Option<String> {
        let d = self.limit.as_ref()?;
        let mut s = String::new();
        let _ = writeln!(s, "q: {}", d.q);
        let _ = writeln!(s, "tail: {}", d.tail);
        let _ = writeln!(s, "tail_slope: {:.6e}", d.tail_slope);
        let _ = writeln!(s, "tail_samples: {}", d.tail_samples);
        if let (Some(f), Some(v)) = (d.focusing.last(), d.values.last()) {
            let _ = writeln!(s, "last_focusing: {f:.6e}");
            let _ = writeln!(s, "last_value: {v:.6e}");
        }
        Some(s)
    }
}

/// Fits the blowup and shrink rates, evaluates the limit diagnostic and the
/// conservation budgets of `series`.
///
/// Non-collapsing or too-short series produce an analysis without fits; the
/// reasons are listed in [`Analysis::notes`].
pub fn analyze_series(series: &DiagnosticsSeries, sigma: f64, d: u32, opts: &AnalysisOptions) -> Analysis {
    let mut notes = Vec::new();
    let regime = match classify_regime(sigma, d) {
        Ok(r) => Some(r),
        Err(e) => {
            notes.push(format!("regime: {e}"));
            None
        }
    };
    let l = series.widths();
    let t = series.times();
    let r = series.ring_radii();
    let focusing = match (l.first(), series.min_width()) {
        (Some(a), Some(b)) => a / b,
        _ => 1.0,
    };

    // Fits need monotone focusing; keep the part after the last maximum of L.
    let start = l
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |(k, m), (i, &v)| if v >= m { (i, v) } else { (k, m) })
        .0;
    let keep: Vec<usize> = thin_by_focusing(&l[start..], opts.thin_ratio)
        .into_iter()
        .map(|k| k + start)
        .collect();
    let tt: Vec<f64> = keep.iter().map(|&k| t[k]).collect();
    let lt: Vec<f64> = keep.iter().map(|&k| l[k]).collect();
    let rt: Vec<f64> = keep.iter().map(|&k| r[k]).collect();

    let (mut blowup, mut shrink, mut limit) = (None, None, None);
    match focusing_window(&lt, opts.decades, opts.exclude_fraction) {
        Some(w) => {
            match fit_power_law(&tt, &lt, w.clone()) {
                Ok(f) => blowup = Some(f),
                Err(e) => notes.push(format!("blowup-rate fit: {e}")),
            }
            match fit_shrink_rate(&lt, &rt, w) {
                Ok(f) => shrink = Some(f),
                Err(e) => notes.push(format!("shrink-rate fit: {e}")),
            }
        }
        None => notes.push(format!(
            "no fit window: focusing {focusing:.3e} over {} thinned samples",
            lt.len()
        )),
    }
    if let Some(reg) = &regime {
        match limit_diagnostic(&tt, &lt, 1.0 / reg.p_pred - 1.0) {
            Ok(dg) => limit = Some(dg),
            Err(e) => notes.push(format!("limit diagnostic: {e}")),
        }
    }

    let rmax_change_last_decade = l.last().and_then(|&le| {
        let k = l.iter().position(|&v| v <= 10.0 * le)?;
        let (a, b) = (r[k], *r.last()?);
        (b > 0.0 && k + 1 < l.len()).then(|| (b - a).abs() / b)
    });

    Analysis {
        regime,
        blowup,
        shrink,
        limit,
        focusing,
        max_power_drift: series.max_power_drift(),
        max_hamiltonian_drift: series.max_hamiltonian_drift(),
        max_regrid_power_jump: series.max_regrid_power_jump(),
        rmax_change_last_decade,
        notes,
        thinned: tt.into_iter().zip(lt).zip(rt).map(|((a, b), c)| (a, b, c)).collect(),
    }
}

/// Rescaled snapshot amplitude against a unit-peak ground state.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileComparison {
    pub rho: Vec<f64>,
    pub solution: Vec<f64>,
    pub ground_state: Vec<f64>,
    /// `max |solution - ground_state|` (both have unit peak).
    pub max_deviation: f64,
}

/// Compares `|ψ|` rescaled about `r_max` with the unit-peak shape of `gs`
/// on `samples` points of `[-half_window, half_window]`.
pub fn compare_with_ground_state(
    snap: &Snapshot,
    gs: &GroundStateProfile,
    half_window: f64,
    samples: usize,
) -> Result<ProfileComparison> {
    let prof = rescaled_profile(&snap.field, &snap.grid, snap.dims.sigma, (-half_window, half_window), samples)?;
    let ground_state: Vec<f64> = prof.rho.iter().map(|&x| gs.unit_peak_shape(x).abs()).collect();
    let max_deviation = prof
        .values
        .iter()
        .zip(&ground_state)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    Ok(ProfileComparison {
        rho: prof.rho,
        solution: prof.values,
        ground_state,
        max_deviation,
    })
}
