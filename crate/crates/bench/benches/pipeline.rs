//! Timings for the hot paths: the two integrators, the curvature stencil,
//! the dilaton solve, and a single Bogoliubov mode.

use criterion::{criterion_group, criterion_main, Criterion};
use sgbh_core::{
    bogoliubov_spectrum, derive_scales, evolve_hyperbolic, evolve_lattice, hyperbolic_kink,
    lattice_kink, max_stable_dt, metric_from_field, ricci_scalar, solve_dilaton,
    BoundaryCondition, CircuitParams, DilatonOptions, Field2D, Grid1D, Grid2D, Polarity,
    QuadratureControls, Signature, SolitonSpec,
};

fn lattice_evolution(c: &mut Criterion) {
    let params = CircuitParams::reference(256).unwrap();
    let scales = derive_scales(&params);
    let center = 128.0 * params.cell_pitch;
    let state = lattice_kink(&params, 0.3 * scales.velocity, center).unwrap();
    let dt = 0.8 * max_stable_dt(&params);
    c.bench_function("lattice_verlet_256_cells_100_steps", |b| {
        b.iter(|| evolve_lattice(&state, &params, BoundaryCondition::Fixed, dt, 100).unwrap())
    });
}

fn field_evolution(c: &mut Criterion) {
    let grid = Grid1D::span(-10.0, 30.0, 1024).unwrap();
    let state = hyperbolic_kink(grid, 1.0, 1.0, 0.3, 10.0, 0.0).unwrap();
    let dt = 0.5 * grid.spacing();
    c.bench_function("field_leapfrog_1024_points_100_steps", |b| {
        b.iter(|| evolve_hyperbolic(&state, 1.0, 1.0, BoundaryCondition::Fixed, dt, 100).unwrap())
    });
}

fn soliton_patch() -> Field2D {
    let spec = SolitonSpec::new(0.5, Polarity::Kink, 0.0).unwrap();
    let tau = Grid1D::new(0.0, 0.01, 41).unwrap();
    let xi = Grid1D::new(0.6, 0.01, 281).unwrap();
    Field2D::tabulate(Grid2D::new(tau, xi), |t, x| spec.phi(t, x))
}

fn curvature(c: &mut Criterion) {
    let patch = metric_from_field(&soliton_patch(), Signature::Lorentzian);
    c.bench_function("ricci_scalar_41x281", |b| {
        b.iter(|| ricci_scalar(&patch).unwrap())
    });
}

fn dilaton(c: &mut Criterion) {
    let spec = SolitonSpec::new(0.5, Polarity::Kink, 0.0).unwrap();
    let phi = soliton_patch();
    let sech = Field2D::tabulate(phi.grid, |t, x| 1.0 / spec.rho(t, x).cosh());
    let opts = DilatonOptions::default();
    let mut group = c.benchmark_group("dilaton");
    group.sample_size(10);
    group.bench_function("conjugate_gradient_41x281", |b| {
        b.iter(|| solve_dilaton(&phi, &sech, &opts).unwrap())
    });
    group.finish();
}

fn bogoliubov(c: &mut Criterion) {
    let controls = QuadratureControls::default();
    let omegas = [0.1];
    let mut group = c.benchmark_group("bogoliubov");
    group.sample_size(20);
    group.bench_function("single_mode_omega_0.1", |b| {
        b.iter(|| bogoliubov_spectrum(0.5, &omegas, &controls).unwrap())
    });
    group.finish();
}

criterion_group!(
    benches,
    lattice_evolution,
    field_evolution,
    curvature,
    dilaton,
    bogoliubov
);
criterion_main!(benches);
