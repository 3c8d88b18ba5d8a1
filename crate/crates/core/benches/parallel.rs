//! Parallel vs sequential Monte Carlo kernels.
//!
//! Each kernel runs inside a one-thread rayon pool and inside a pool with
//! one thread per core (at least four). `cargo bench --no-default-features`
//! builds the plain sequential loops instead; its `serial` rows are then the
//! feature-off baseline.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use pclocal::generators::{free_product_ball, tree_ball};
use pclocal::percolation::{giant_sweep, root_survival_prob};
use pclocal::spectral::spectral_gap;
use pclocal::walks::{escape_mc, EscapeQuery};
use pclocal::{Family, GeneratorSpec, VertexSet};
use rayon::ThreadPool;
use std::hint::black_box;

fn pools() -> Vec<(String, ThreadPool)> {
    let build = |n| rayon::ThreadPoolBuilder::new().num_threads(n).build().unwrap();
    let mode = if cfg!(feature = "parallel") { "rayon" } else { "serial" };
    let all = std::thread::available_parallelism().map_or(1, |n| n.get()).max(4);
    vec![(format!("{mode}-1"), build(1)), (format!("{mode}-{all}"), build(all))]
}

fn sweep(c: &mut Criterion) {
    let spec = GeneratorSpec::new(Family::RandomRegular, vec![20_000, 3], 1);
    let mut group = c.benchmark_group("giant_sweep");
    group.sample_size(10);
    for (name, pool) in pools() {
        group.bench_function(BenchmarkId::new("rr20000", &name), |b| {
            b.iter(|| pool.install(|| giant_sweep(black_box(&spec), &[0.45, 0.5, 0.55], 40, 0.01, 7).unwrap()))
        });
    }
    group.finish();
}

fn survival(c: &mut Criterion) {
    let ball = free_product_ball(7, 7).unwrap();
    let mut group = c.benchmark_group("root_survival");
    group.sample_size(10);
    for (name, pool) in pools() {
        group.bench_function(BenchmarkId::new("fp7_r7", &name), |b| {
            b.iter(|| pool.install(|| root_survival_prob(black_box(&ball), 0.3, 2000, 3).unwrap()))
        });
    }
    group.finish();
}

fn walks(c: &mut Criterion) {
    let ball = tree_ball(3, 10).unwrap();
    let mut q = EscapeQuery::new(
        &ball,
        VertexSet::from_vertices(ball.graph().vertex_count(), [ball.root()]),
    );
    q.trials = 20_000;
    let mut group = c.benchmark_group("escape_mc");
    group.sample_size(10);
    for (name, pool) in pools() {
        group.bench_function(BenchmarkId::new("tree3_r10", &name), |b| {
            b.iter(|| pool.install(|| escape_mc(black_box(&q)).unwrap()))
        });
    }
    group.finish();
}

fn spectral(c: &mut Criterion) {
    let g = GeneratorSpec::new(Family::RandomRegular, vec![5_000, 3], 2)
        .generate()
        .unwrap()
        .into_graph();
    let mut group = c.benchmark_group("spectral_gap");
    group.sample_size(10);
    for (name, pool) in pools() {
        group.bench_function(BenchmarkId::new("rr5000", &name), |b| {
            b.iter(|| pool.install(|| spectral_gap(black_box(&g), 1e-6).unwrap()))
        });
    }
    group.finish();
}

criterion_group!(benches, sweep, survival, walks, spectral);
criterion_main!(benches);
