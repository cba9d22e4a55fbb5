use bnls_core::evolution::WaveField;
use bnls_core::mesh::{
    build_monitor, equidistribute, needs_regrid, redistribute, regrid, MonitorParams, RadialGrid, RegridPolicy,
};
use num_complex::Complex64;
use proptest::prelude::*;

/// Inverts the cumulative integral of `w` on a uniform reference grid of
/// `m` cells with the trapezoidal rule.
fn brute_force_nodes(w: impl Fn(f64) -> f64, outer: f64, m: usize, n: usize) -> Vec<f64> {
    let h = outer / m as f64;
    let mut cum = vec![0.0; m + 1];
    for i in 0..m {
        let (a, b) = (i as f64 * h, (i + 1) as f64 * h);
        cum[i + 1] = cum[i] + 0.5 * h * (w(a) + w(b));
    }
    let total = cum[m];
    (0..n)
        .map(|k| {
            let target = total * k as f64 / (n - 1) as f64;
            let i = cum.partition_point(|&c| c < target).clamp(1, m);
            let t = (target - cum[i - 1]) / (cum[i] - cum[i - 1]);
            (i - 1) as f64 * h + t * h
        })
        .collect()
}

#[test]
fn equidistribution_of_linear_weight_matches_reference() {
    let w = |r: f64| r.max(1e-12);
    let dense = RadialGrid::uniform(20_001, 1.0).unwrap();
    let weight: Vec<f64> = dense.nodes().iter().map(|&r| w(r)).collect();
    // Nine nodes (the minimum is eight); every second node is the five-node
    // answer r_m = sqrt(m/4).
    let g = equidistribute(&dense, &weight, 9).unwrap();
    let oracle = brute_force_nodes(w, 1.0, 1_000_000, 9);
    for (m, (&a, &b)) in g.nodes().iter().zip(&oracle).enumerate() {
        assert!((a - b).abs() < 1e-6, "node {m}: {a} vs {b}");
    }
    let even: Vec<f64> = g.nodes().iter().step_by(2).copied().collect();
    for (m, a) in even.iter().enumerate() {
        assert!((a - (m as f64 / 4.0).sqrt()).abs() < 1e-6, "node {m}: {a}");
    }
    assert!(equidistribute(&dense, &weight, 5).is_err());
}

#[test]
fn gaussian_bump_attracts_nodes() {
    let w = |r: f64| 1.0 + 50.0 * (-((r - 5.0) / 0.2).powi(2)).exp();
    let dense = RadialGrid::uniform(10_001, 10.0).unwrap();
    let weight: Vec<f64> = dense.nodes().iter().map(|&r| w(r)).collect();
    let n = 101;
    let g = equidistribute(&dense, &weight, n).unwrap();
    let oracle = brute_force_nodes(w, 10.0, 1_000_000, n);
    let near = |x: &[f64]| x[1..n - 1].iter().filter(|r| (*r - 5.0).abs() <= 0.4).count();
    assert_eq!(near(g.nodes()), near(&oracle));
    assert!(2 * near(g.nodes()) >= n - 2);
}

#[test]
fn gaussian_transfer_to_clustered_grid() {
    let src = RadialGrid::uniform(512, 6.0).unwrap();
    let clustered = RadialGrid::new((0..512).map(|m| 6.0 * (m as f64 / 511.0).powf(1.5)).collect()).unwrap();
    let f = WaveField::from_fn(src.nodes(), 0.0, |r| Complex64::new((-r * r).exp(), 0.0));
    let g = regrid(&f, &src, &clustered).unwrap();
    let err = clustered
        .nodes()
        .iter()
        .zip(&g.values)
        .map(|(&r, v)| (v.re - (-r * r).exp()).abs() + v.im.abs())
        .fold(0.0, f64::max);
    assert!(err < 1e-8, "interpolation error {err:e}");
}

#[test]
fn regrid_round_trip() {
    let a = RadialGrid::uniform(1024, 10.0).unwrap();
    let b = RadialGrid::new((0..1024).map(|m| 10.0 * (m as f64 / 1023.0).powf(1.3)).collect()).unwrap();
    let f = WaveField::from_fn(a.nodes(), 0.0, |r| {
        Complex64::from_polar((-(r - 5.0) * (r - 5.0)).exp(), 0.3 * r)
    });
    let back = regrid(&regrid(&f, &a, &b).unwrap(), &b, &a).unwrap();
    let err = f.values.iter().zip(&back.values).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
    assert!(err < 1e-6, "round trip {err:e}");
}

#[test]
fn trigger_thresholds() {
    let policy = RegridPolicy {
        min_points_in_core: 40,
        core_half_width: 1.0,
    };
    let g = RadialGrid::uniform(2001, 10.0).unwrap();
    // 200 nodes inside [5 - 0.5, 5 + 0.5) at spacing 0.005.
    assert!(!needs_regrid(&g, 0.5, 5.0, &policy));
    // Core of half-width 0.095 holds 39 nodes.
    assert_eq!(g.count_within(5.0, 0.095), 39);
    assert!(needs_regrid(&g, 0.095, 5.0, &policy));
}

#[test]
fn fresh_grid_satisfies_policy() {
    let g0 = RadialGrid::uniform(2048, 20.0).unwrap();
    let l = 0.05;
    let f = WaveField::from_fn(g0.nodes(), 0.0, |r| Complex64::new((-((r - 8.0) / l).powi(2)).exp(), 0.0));
    let red = redistribute(&f, &g0, &MonitorParams::default()).unwrap();
    let policy = RegridPolicy {
        min_points_in_core: 40,
        core_half_width: 1.0,
    };
    assert!(needs_regrid(&g0, l, 8.0, &policy));
    assert!(!needs_regrid(&red.grid, l, 8.0, &policy));
}

fn ring_field(grid: &RadialGrid, center: f64, width: f64) -> WaveField {
    WaveField::from_fn(grid.nodes(), 0.0, |r| {
        Complex64::from_polar((-((r - center) / width).powi(2)).exp(), r)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn redistributed_grids_are_valid(center in 1.0f64..15.0, width in 0.02f64..2.0, n in 64usize..600) {
        let g0 = RadialGrid::uniform(n, 20.0).unwrap();
        let f = ring_field(&g0, center, width);
        let red = redistribute(&f, &g0, &MonitorParams::default()).unwrap();
        let x = red.grid.nodes();
        prop_assert_eq!(x.len(), n);
        prop_assert_eq!(x[0], 0.0);
        prop_assert_eq!(x[n - 1], 20.0);
        prop_assert!(x.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn monitor_factors_at_least_one(center in 1.0f64..15.0, width in 0.05f64..2.0, smooth in any::<bool>()) {
        let g0 = RadialGrid::new((0..300).map(|m| 20.0 * (m as f64 / 299.0).powf(1.2)).collect()).unwrap();
        let f = ring_field(&g0, center, width);
        let params = MonitorParams { smoothness: smooth, ..Default::default() };
        let w = build_monitor(&f, &g0, &params).unwrap();
        for m in 0..g0.len() {
            prop_assert!(w.w1[m] >= 1.0 && w.w2[m] >= 1.0 && w.w3[m] >= 1.0);
            prop_assert!((w.composite[m] - w.w1[m] * w.w2[m] * w.w3[m]).abs() <= 1e-12 * w.composite[m]);
        }
    }
}
