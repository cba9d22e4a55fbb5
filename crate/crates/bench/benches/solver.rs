use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use num_complex::Complex64;

use bnls_core::discretization::{biharmonic_operator, BoundarySpec, DimensionParams};
use bnls_core::evolution::{initial_grid, Integrator, SimConfig, StepOptions};
use bnls_core::groundstate::{solve_ground_state_1d, OneDimensionalOptions};
use bnls_core::mesh::{redistribute, regrid_with, RadialGrid};

fn step(c: &mut Criterion) {
    let mut g = c.benchmark_group("crank_nicolson_step");
    for n in [1024usize, 4096] {
        let mut cfg = SimConfig::ring(2, 4.0, 2.0, 5.0);
        cfg.grid.nodes = n;
        let (grid, field) = initial_grid(&cfg).unwrap();
        let integ = Integrator::new(&grid, DimensionParams::new(2, 4.0).unwrap(), StepOptions::default()).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| b.iter(|| integ.step(&field, 1e-4).unwrap()));
    }
    g.finish();
}

fn operator(c: &mut Criterion) {
    let grid = RadialGrid::uniform(4096, 20.0).unwrap();
    c.bench_function("biharmonic_assembly_4096", |b| {
        b.iter(|| biharmonic_operator(&grid, 2, BoundarySpec::default()).unwrap())
    });
    let a = biharmonic_operator(&grid, 2, BoundarySpec::default()).unwrap();
    let v: Vec<Complex64> = grid.nodes().iter().map(|r| Complex64::new((-r * r).exp(), 0.0)).collect();
    c.bench_function("biharmonic_apply_4096", |b| b.iter(|| a.apply(&v).unwrap()));
}

fn mesh(c: &mut Criterion) {
    let mut cfg = SimConfig::ring(2, 4.0, 2.0, 5.0);
    cfg.grid.nodes = 4096;
    let (grid, field) = initial_grid(&cfg).unwrap();
    let monitor = cfg.resolved().regrid.monitor();
    c.bench_function("redistribute_4096", |b| b.iter(|| redistribute(&field, &grid, &monitor).unwrap()));
    let target = RadialGrid::uniform(4096, grid.outer_radius()).unwrap();
    c.bench_function("quintic_transfer_4096", |b| b.iter(|| regrid_with(&field, &grid, &target, 6).unwrap()));
}

fn ground_state(c: &mut Criterion) {
    let mut g = c.benchmark_group("ground_state");
    g.sample_size(10);
    g.bench_function("line_sigma4_1024", |b| {
        b.iter(|| solve_ground_state_1d(4.0, OneDimensionalOptions::default()).unwrap())
    });
    g.finish();
}

criterion_group!(benches, step, operator, mesh, ground_state);
criterion_main!(benches);
