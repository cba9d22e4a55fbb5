use super::{RadialGrid, MIN_NODES};
use crate::error::{Error, Result};

/// Places `n` nodes on the span of `grid` so that every new cell carries the
/// same share of `∫ w dr`, where `w` is the piecewise-linear interpolant of
/// `weight` on `grid`.
///
/// The cumulative integral is inverted exactly inside each old cell (it is a
/// quadratic there), so the equal-share property holds to roundoff.
pub fn equidistribute(grid: &RadialGrid, weight: &[f64], n: usize) -> Result<RadialGrid> {
    if n < MIN_NODES {
        return Err(Error::TooFewNodes {
            min: MIN_NODES,
            actual: n,
        });
    }
    let x = grid.nodes();
    if weight.len() != x.len() {
        return Err(Error::LengthMismatch {
            expected: x.len(),
            actual: weight.len(),
        });
    }
    if let Some((m, w)) = weight.iter().enumerate().find(|(_, w)| !(**w > 0.0) || !w.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "weight must be positive and finite, got {w} at node {m}"
        )));
    }

    let mut cumulative = Vec::with_capacity(x.len());
    cumulative.push(0.0);
    for m in 0..x.len() - 1 {
        let cell = 0.5 * (weight[m] + weight[m + 1]) * (x[m + 1] - x[m]);
        cumulative.push(cumulative[m] + cell);
    }
    let total = *cumulative.last().unwrap();
    let share = total / (n - 1) as f64;

    let mut nodes = Vec::with_capacity(n);
    nodes.push(x[0]);
    let mut cell = 0;
    for k in 1..n - 1 {
        let target = share * k as f64;
        while cell + 1 < x.len() - 1 && cumulative[cell + 1] <= target {
            cell += 1;
        }
        let (a, h) = (x[cell], x[cell + 1] - x[cell]);
        let (wa, wb) = (weight[cell], weight[cell + 1]);
        let rem = (target - cumulative[cell]).max(0.0);
        // Solve wa·s + (wb - wa)/(2h)·s² = rem for the offset s in [0, h].
        let slope = (wb - wa) / h;
        let s = 2.0 * rem / (wa + (wa * wa + 2.0 * slope * rem).max(0.0).sqrt());
        nodes.push(a + s.clamp(0.0, h));
    }
    nodes.push(grid.outer_radius());
    // Roundoff can only merge nodes when a cell share underflows; report it.
    RadialGrid::new(nodes).map_err(|e| Error::InvalidGrid(format!("equidistribution failed: {e}")))
}
