use bnls_core::discretization::DimensionParams;
use bnls_core::evolution::{choose_dt, initial_grid, run, Integrator, NoObserver, SimConfig, StepOptions, WaveField};
use bnls_core::mesh::RadialGrid;
use num_complex::Complex64;
use proptest::prelude::*;

fn advance(integ: &Integrator, f: &WaveField, dt: f64, steps: usize) -> WaveField {
    (0..steps).fold(f.clone(), |g, _| integ.step(&g, dt).unwrap())
}

fn max_diff(a: &WaveField, b: &WaveField) -> f64 {
    a.values.iter().zip(&b.values).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

#[test]
fn step_doubling_shows_second_order() {
    let grid = RadialGrid::uniform(201, 12.0).unwrap();
    let dims = DimensionParams::new(2, 1.5).unwrap();
    let integ = Integrator::new(&grid, dims, StepOptions::default()).unwrap();
    // Smooth and even at the origin, so no unresolved high modes are excited.
    let f = WaveField::from_fn(grid.nodes(), 0.0, |r| {
        Complex64::new(1.2 * (1.0 + r * r / 4.0) * (-r * r / 4.0).exp(), 0.0)
    });
    let t = 0.02;
    let u: Vec<WaveField> = [8, 16, 32].iter().map(|&k| advance(&integ, &f, t / k as f64, k)).collect();
    let order = (max_diff(&u[0], &u[1]) / max_diff(&u[1], &u[2])).log2();
    assert!((1.8..=2.2).contains(&order), "observed order {order:.3}");
}

#[test]
fn time_step_law() {
    assert_eq!(choose_dt(1.0, 0.1, 1.0), 0.1);
    assert!((choose_dt(1e-2, 0.1, 1.0) - 1e-9).abs() < 1e-24);
}

fn small_run_config() -> SimConfig {
    let mut c = SimConfig::ring(2, 4.0, 2.0, 5.0);
    c.grid.nodes = 512;
    c.regrid.min_points_in_core = 60;
    c.stopping.l_min = 0.05;
    c
}

#[test]
fn identical_configs_give_identical_series() {
    let cfg = small_run_config();
    let csv = |cfg: &SimConfig| {
        let out = run(cfg, &mut NoObserver).unwrap();
        let mut buf = Vec::new();
        out.series.write_csv(&mut buf).unwrap();
        (buf, out.state.tau)
    };
    let (a, tau_a) = csv(&cfg);
    let (b, tau_b) = csv(&cfg);
    assert!(!a.is_empty());
    assert_eq!(a, b);
    assert_eq!(tau_a.to_bits(), tau_b.to_bits());
}

#[test]
fn run_invariants_hold() {
    let cfg = small_run_config();
    let (g0, _) = initial_grid(&cfg).unwrap();
    let out = run(&cfg, &mut NoObserver).unwrap();
    assert_eq!(out.state.grid.len(), g0.len());
    assert_eq!(out.state.field.len(), out.state.grid.len());
    assert!(out.state.field.is_finite());
    assert!(out.state.tau > 0.0);
    let rec = &out.series.records;
    assert!(rec.windows(2).all(|w| w[1].t > w[0].t));
    assert!(rec.iter().all(|r| r.l > 0.0 && r.r_max >= 0.0));
}

proptest! {
    #[test]
    fn halving_width_divides_step_by_sixteen(l in 1e-3f64..1.0, c in 1e-3f64..1.0) {
        let a = choose_dt(l, c, 1.0);
        let b = choose_dt(l / 2.0, c, 1.0);
        prop_assume!(b > 1e-15);
        prop_assert!((a / b - 16.0).abs() < 1e-9);
    }

    #[test]
    fn zero_field_is_a_fixed_point(dt in 1e-8f64..1e-1, n in 8usize..100) {
        let grid = RadialGrid::uniform(n, 5.0).unwrap();
        let integ = Integrator::new(&grid, DimensionParams::new(2, 2.0).unwrap(), StepOptions::default()).unwrap();
        let out = integ.step(&WaveField::zeros(n), dt).unwrap();
        prop_assert!(out.values.iter().all(|v| *v == Complex64::new(0.0, 0.0)));
    }
}
