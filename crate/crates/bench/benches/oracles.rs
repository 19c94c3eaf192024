use std::hint::black_box;

use congest_bench::{dense_fixture, sparse_fixture};
use congest_core::oracle::{exact_with, max_matching_edges, SizeGuard};
use congest_core::Problem;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn exact(c: &mut Criterion) {
    let mut group = c.benchmark_group("exact");
    group.sample_size(10);
    let guard = SizeGuard::default();
    for n in [20, 28] {
        let g = dense_fixture(n, 3);
        for p in [Problem::Mvc, Problem::Mds, Problem::MaxIs] {
            group.bench_with_input(BenchmarkId::new(p.name(), n), &g, |b, g| {
                b.iter(|| exact_with(p, black_box(g), guard).expect("within guard"))
            });
        }
    }
    group.finish();
}

fn matching(c: &mut Criterion) {
    let mut group = c.benchmark_group("matching");
    for n in [256, 1024] {
        let g = sparse_fixture(n, 5);
        group.bench_with_input(BenchmarkId::from_parameter(n), &g, |b, g| b.iter(|| max_matching_edges(black_box(g))));
    }
    group.finish();
}

criterion_group!(benches, exact, matching);
criterion_main!(benches);
