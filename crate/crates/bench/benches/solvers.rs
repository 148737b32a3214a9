use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use targetzone::mc::{simulate, SimConfig};
use targetzone::spectral::build_spectrum;
use targetzone::stationary::solve_smooth_pasting;
use targetzone::transient::{ProjectionMode, TransientSolution};
use targetzone_bench::reference_params;

fn spectrum(c: &mut Criterion) {
    for beta in [0.0, 5.0, 15.0] {
        let p = reference_params(beta);
        c.bench_function(&format!("spectrum_k50_beta{beta}"), |b| {
            b.iter(|| build_spectrum(black_box(&p), 50).unwrap())
        });
    }
}

fn stationary(c: &mut Criterion) {
    let p = reference_params(5.0);
    c.bench_function("smooth_pasting_beta5", |b| {
        b.iter(|| solve_smooth_pasting(black_box(&p)).unwrap())
    });
}

fn transient(c: &mut Criterion) {
    let p = reference_params(1.0);
    c.bench_function("transient_coeffs_k200", |b| {
        b.iter(|| TransientSolution::new(black_box(&p), 200, ProjectionMode::ExactProjection).unwrap())
    });
    let ts = TransientSolution::new(&p, 200, ProjectionMode::ExactProjection).unwrap();
    c.bench_function("transient_eval_k200", |b| {
        b.iter(|| ts.value(black_box(1.5), black_box(0.03)).unwrap())
    });
}

fn monte_carlo(c: &mut Criterion) {
    let mut group = c.benchmark_group("mc");
    group.sample_size(10);
    let mut cfg = SimConfig::new(reference_params(1.0), 500, 1);
    cfg.dt = 1.0 / 200.0;
    group.bench_function("simulate_500_paths", |b| b.iter(|| simulate(black_box(&cfg)).unwrap()));
    group.finish();
}

criterion_group!(solvers, spectrum, stationary, transient, monte_carlo);
criterion_main!(solvers);
