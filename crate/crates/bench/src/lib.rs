//! Benchmark fixtures shared by the criterion benches.

use congest_core::graph::{gen_gnp, PortGraph};

pub fn dense_fixture(n: usize, seed: u64) -> PortGraph {
    gen_gnp(n, 0.5, seed).expect("valid parameters")
}

pub fn sparse_fixture(n: usize, seed: u64) -> PortGraph {
    let p = (40.0 * (n as f64).ln() / n as f64).min(1.0);
    gen_gnp(n, p, seed).expect("valid parameters")
}
