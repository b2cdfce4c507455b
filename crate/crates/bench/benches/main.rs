use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use hwlab_bench::{bench_rho, vertex_fixture};
use hwlab_core::krawtchouk::bias_profile;
use hwlab_core::lp::{extremal_tail, sparsify, SupportFilter, TailObjective};
use hwlab_core::noise::smooth;
use hwlab_core::pmf::WeightPMF;
use hwlab_core::transform::bu_to_sb;

fn bench_extremal_tail(c: &mut Criterion) {
    let mut group = c.benchmark_group("extremal_tail");
    for &(n, k) in &[(60i64, 3i64), (100, 3), (400, 3)] {
        let t = ((n * k) as f64).sqrt().ceil() as i64;
        let t = t + (n - t).rem_euclid(2);
        group.bench_with_input(BenchmarkId::from_parameter(format!("n{n}_k{k}")), &(n, k, t), |b, &(n, k, t)| {
            b.iter(|| extremal_tail(n, k, t, TailObjective::MaxTail, SupportFilter::All).unwrap())
        });
    }
    group.finish();
}

fn bench_smooth(c: &mut Criterion) {
    let mut group = c.benchmark_group("smooth");
    let rho = bench_rho();
    for &n in &[40i64, 100] {
        let p = WeightPMF::binomial(n).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &p, |b, p| {
            b.iter(|| smooth(p, &rho).unwrap())
        });
    }
    group.finish();
}

fn bench_pipeline(c: &mut Criterion) {
    let mut group = c.benchmark_group("pipeline");
    group.sample_size(20);
    for &(n, k) in &[(60i64, 4i64), (100, 4)] {
        let input = vertex_fixture(n, k);
        group.bench_with_input(BenchmarkId::from_parameter(format!("n{n}_k{k}")), &(input, k), |b, (input, k)| {
            b.iter(|| bu_to_sb(input, *k).unwrap())
        });
    }
    group.finish();
}

fn bench_sparsify(c: &mut Criterion) {
    let p = WeightPMF::binomial(60).unwrap();
    c.bench_function("sparsify_binomial_60_k4", |b| {
        b.iter(|| sparsify(&p, 4).unwrap())
    });
}

fn bench_bias_profile(c: &mut Criterion) {
    let p = vertex_fixture(100, 4);
    c.bench_function("bias_profile_vertex_100", |b| b.iter(|| bias_profile(&p)));
}

criterion_group!(
    benches,
    bench_extremal_tail,
    bench_smooth,
    bench_pipeline,
    bench_sparsify,
    bench_bias_profile
);
criterion_main!(benches);
