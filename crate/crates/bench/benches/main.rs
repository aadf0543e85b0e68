use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use sgl_core::chains;
use sgl_core::graph::random_graph;
use sgl_core::octopus::{self, RateSystem};
use sgl_core::spectra::{self, Tolerances};
use sgl_core::structure;

fn bench_builds(c: &mut Criterion) {
    let mut group = c.benchmark_group("build");
    let g5 = random_graph(5, 0.8, 1);
    let g6 = random_graph(6, 0.8, 1);
    let g12 = random_graph(12, 0.5, 1);

    group.bench_function("walk-n12", |b| {
        b.iter(|| chains::build_walk(black_box(&g12)).unwrap())
    });
    group.bench_function("interchange-n5", |b| {
        b.iter(|| chains::build_interchange(black_box(&g5)).unwrap())
    });
    group.bench_function("interchange-n6", |b| {
        b.iter(|| chains::build_interchange(black_box(&g6)).unwrap())
    });
    group.bench_function("exclusion-n12-k6", |b| {
        b.iter(|| chains::build_exclusion(black_box(&g12), 6).unwrap())
    });
    group.bench_function("matching-n6", |b| {
        b.iter(|| chains::build_matching(black_box(&g6)).unwrap())
    });
    group.finish();
}

fn bench_gaps(c: &mut Criterion) {
    let mut group = c.benchmark_group("gap");
    let tols = Tolerances::default();
    let g5 = random_graph(5, 0.8, 1);
    let g6 = random_graph(6, 0.8, 1);
    let ip5 = chains::build_interchange(&g5).unwrap();
    let ip6 = chains::build_interchange(&g6).unwrap();
    let action6 = chains::interchange_action(&g6, 6).unwrap();

    group.bench_function("interchange-n5-dense", |b| {
        b.iter(|| ip5.gap(black_box(&tols)).unwrap())
    });
    group.sample_size(10);
    group.bench_function("interchange-n6-dense", |b| {
        b.iter(|| ip6.gap(black_box(&tols)).unwrap())
    });
    group.bench_function("interchange-n6-lanczos", |b| {
        b.iter(|| {
            spectra::gap_via_lanczos(
                |v, out| action6.apply_neg_generator(v, out),
                action6.dim,
                action6.norm_bound(),
                black_box(17),
            )
            .unwrap()
        })
    });
    group.finish();
}

fn bench_reduction(c: &mut Criterion) {
    let mut group = c.benchmark_group("reduce");
    let g = random_graph(60, 0.3, 2);
    group.bench_function("n60-one-vertex", |b| {
        b.iter(|| black_box(&g).reduce_at(0).unwrap())
    });
    group.finish();
}

fn bench_octopus(c: &mut Criterion) {
    let mut group = c.benchmark_group("octopus");
    let r5 = RateSystem::new(vec![1.0, 2.0, 3.0, 4.0]).unwrap();
    let r6 = RateSystem::new(vec![1.0, 2.0, 3.0, 4.0, 5.0]).unwrap();

    group.bench_function("comparison-matrix-n5", |b| {
        b.iter(|| octopus::build_c(black_box(&r5)).unwrap())
    });
    group.sample_size(10);
    group.bench_function("comparison-matrix-n6", |b| {
        b.iter(|| octopus::build_c(black_box(&r6)).unwrap())
    });
    group.bench_function("correction-decomposition-n5", |b| {
        b.iter(|| octopus::verify_corr_decomposition(black_box(&r5)).unwrap())
    });
    group.finish();
}

fn bench_structure(c: &mut Criterion) {
    let mut group = c.benchmark_group("structure");
    let tols = Tolerances::default();
    let g4 = random_graph(4, 1.0, 3);
    group.bench_function("subset-sums-n4", |b| {
        b.iter(|| structure::subset_sum_check(black_box(&g4), &tols).unwrap())
    });
    group.sample_size(10);
    group.bench_function("restricted-subspace-n4", |b| {
        b.iter(|| structure::h_subspace(black_box(4)).unwrap())
    });
    group.finish();
}

criterion_group!(
    benches,
    bench_builds,
    bench_gaps,
    bench_reduction,
    bench_octopus,
    bench_structure
);
criterion_main!(benches);
