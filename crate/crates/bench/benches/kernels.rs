use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use num_complex::Complex64;
use splitquad::eval::assemble_nystrom;
use splitquad::gauss::QuadratureRule;
use splitquad::kernels::DoubleLayer;
use splitquad::subdiv::{create_subdivision, SubdivParams};
use splitquad::{EvalOptions, TargetWeights};
use splitquad_bench::annulus_boundary;

fn bench_rule_generation(c: &mut Criterion) {
    c.bench_function("gauss_legendre_16", |b| {
        b.iter(|| QuadratureRule::gauss_legendre(std::hint::black_box(16)).unwrap())
    });
}

fn bench_target_weights(c: &mut Criterion) {
    let rule = QuadratureRule::gauss_legendre(16).unwrap();
    let z = Complex64::new(0.3, 0.05);
    c.bench_function("target_weights_16", |b| {
        b.iter(|| TargetWeights::compute(&rule, std::hint::black_box(z)).unwrap())
    });
}

fn bench_subdivision(c: &mut Criterion) {
    let mut group = c.benchmark_group("create_subdivision");
    for alpha in [100.0, 1000.0, 10000.0] {
        let params = SubdivParams::new(4.0, 3.0, alpha, 0.125);
        let z = Complex64::new(0.2, 0.015);
        group.bench_with_input(BenchmarkId::from_parameter(alpha), &params, |b, p| {
            b.iter(|| create_subdivision(std::hint::black_box(z), p))
        });
    }
    group.finish();
}

fn bench_assembly(c: &mut Criterion) {
    let boundary = annulus_boundary();
    let mut group = c.benchmark_group("assemble_nystrom");
    group.sample_size(10);
    for alpha in [125.0, 2000.0] {
        let kernel = DoubleLayer::new(alpha);
        group.bench_with_input(BenchmarkId::from_parameter(alpha), &kernel, |b, k| {
            b.iter(|| assemble_nystrom(&boundary, k, &EvalOptions::default()).unwrap())
        });
    }
    group.finish();
}

criterion_group!(
    benches,
    bench_rule_generation,
    bench_target_weights,
    bench_subdivision,
    bench_assembly
);
criterion_main!(benches);
