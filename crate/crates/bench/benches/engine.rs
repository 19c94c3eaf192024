use std::hint::black_box;

use congest_bench::sparse_fixture;
use congest_core::algos::{run_named, AlgoParams};
use congest_core::SimConfig;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn params(pairs: &[(&str, &str)]) -> AlgoParams {
    pairs.iter().map(|&(k, v)| (k.to_string(), v.to_string())).collect()
}

fn algorithms(c: &mut Criterion) {
    let cases = [
        ("propose-matching", params(&[])),
        ("greedy-mis", params(&[])),
        ("ball-growing", params(&[("problem", "maxis")])),
        ("rotation-matching", params(&[])),
    ];
    let mut group = c.benchmark_group("engine");
    group.sample_size(10);
    for n in [64, 128] {
        let g = sparse_fixture(n, 7);
        let cfg = SimConfig::default().with_seed(1);
        for (name, ps) in &cases {
            group.bench_with_input(BenchmarkId::new(*name, n), &g, |b, g| {
                b.iter(|| run_named(name, black_box(g), ps, &cfg).expect("runs"))
            });
        }
    }
    group.finish();
}

criterion_group!(benches, algorithms);
criterion_main!(benches);
