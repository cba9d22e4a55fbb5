use std::fmt::Write as _;

use crate::error::{Error, Result};

/// Smallest node count supported: the seven-point stencil plus one boundary node.
pub const MIN_NODES: usize = 8;

/// Strictly increasing radial node set on `[0, outer_radius]`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialGrid {
    nodes: Vec<f64>,
}

impl RadialGrid {
    /// Validates and wraps a node vector. The first node must be the origin.
    pub fn new(nodes: Vec<f64>) -> Result<Self> {
        if nodes.len() < MIN_NODES {
            return Err(Error::TooFewNodes {
                min: MIN_NODES,
                actual: nodes.len(),
            });
        }
        if nodes[0] != 0.0 {
            return Err(Error::InvalidGrid(format!(
                "first node must be 0, got {}",
                nodes[0]
            )));
        }
        for (m, w) in nodes.windows(2).enumerate() {
            if !(w[1] > w[0]) || !w[1].is_finite() {
                return Err(Error::InvalidGrid(format!(
                    "nodes not strictly increasing at index {}: {} -> {}",
                    m, w[0], w[1]
                )));
            }
        }
        Ok(Self { nodes })
    }

    pub fn uniform(n: usize, outer_radius: f64) -> Result<Self> {
        if !(outer_radius > 0.0) {
            return Err(Error::InvalidInput(format!(
                "outer radius must be positive, got {outer_radius}"
            )));
        }
        let h = outer_radius / (n.max(2) - 1) as f64;
        let mut nodes: Vec<f64> = (0..n).map(|m| m as f64 * h).collect();
        if let Some(last) = nodes.last_mut() {
            *last = outer_radius;
        }
        Self::new(nodes)
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn origin_included(&self) -> bool {
        self.nodes[0] == 0.0
    }

    pub fn outer_radius(&self) -> f64 {
        *self.nodes.last().expect("validated grid is non-empty")
    }

    /// Cell widths `Δr_m = r_{m+1} - r_m`, length `N - 1`.
    pub fn spacings(&self) -> Vec<f64> {
        self.nodes.windows(2).map(|w| w[1] - w[0]).collect()
    }

    /// Largest ratio between the widths of adjacent cells (≥ 1).
    pub fn max_adjacent_spacing_ratio(&self) -> f64 {
        self.spacings()
            .windows(2)
            .map(|w| (w[1] / w[0]).max(w[0] / w[1]))
            .fold(1.0, f64::max)
    }

    /// Number of nodes with `|r - center| <= half_width`.
    pub fn count_within(&self, center: f64, half_width: f64) -> usize {
        let lo = self.nodes.partition_point(|&r| r < center - half_width);
        let hi = self.nodes.partition_point(|&r| r <= center + half_width);
        hi.saturating_sub(lo)
    }

    /// Index `m` of the cell with `r_m <= r < r_{m+1}` (clamped to the last cell).
    pub fn locate(&self, r: f64) -> usize {
        let k = self.nodes.partition_point(|&x| x <= r);
        k.saturating_sub(1).min(self.nodes.len() - 2)
    }

    /// Plain-text dump: one radius per line with 17 significant digits.
    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(self.nodes.len() * 24);
        for r in &self.nodes {
            let _ = writeln!(out, "{r:.16e}");
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let nodes = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(|l| {
                l.parse::<f64>()
                    .map_err(|e| Error::InvalidGrid(format!("bad radius {l:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(nodes)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_grids() {
        assert!(matches!(
            RadialGrid::new(vec![0.0, 1.0, 2.0]),
            Err(Error::TooFewNodes { .. })
        ));
        let mut v: Vec<f64> = (0..10).map(f64::from).collect();
        v[4] = v[3];
        assert!(matches!(RadialGrid::new(v), Err(Error::InvalidGrid(_))));
        let v: Vec<f64> = (1..11).map(f64::from).collect();
        assert!(matches!(RadialGrid::new(v), Err(Error::InvalidGrid(_))));
    }

    #[test]
    fn text_dump_round_trips_exactly() {
        let nodes: Vec<f64> = (0..20).map(|m| (m as f64 / 19.0).powf(1.7) * 3.3).collect();
        let g = RadialGrid::new(nodes).unwrap();
        let back = RadialGrid::from_text(&g.to_text()).unwrap();
        assert_eq!(g, back);
        assert_eq!(g.to_text().lines().count(), 20);
    }

    #[test]
    fn counting_and_location() {
        let g = RadialGrid::uniform(11, 1.0).unwrap();
        assert_eq!(g.count_within(0.5, 0.25), 5);
        assert_eq!(g.locate(0.55), 5);
        assert_eq!(g.locate(1.0), 9);
        assert_eq!(g.locate(0.0), 0);
    }
}
