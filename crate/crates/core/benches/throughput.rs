//! Throughput benchmarks for the data-parallel inner loops.
//!
//! Run `cargo bench` for the rayon path and
//! `cargo bench --no-default-features` for the sequential fallback; comparing
//! the two reports shows the parallel speedup per workload.

use criterion::{criterion_group, criterion_main, Criterion};

use qloops::bits::BitString;
use qloops::grover::{grover_success_probability, ideal_transform, OracleProblem};
use qloops::nonlocal::{marginal_statistics, BellScenario};
use qloops::timesym::{enumerate_halvings, external_observer_statistics, reconstruction_deviation};

fn bench_reconstruction(c: &mut Criterion) {
    let k = 6;
    let u = ideal_transform(k);
    let halvings = enumerate_halvings(k).unwrap();
    c.bench_function("reconstruction_k6_all_halvings", |b| {
        b.iter(|| {
            let max = halvings
                .iter()
                .map(|h| reconstruction_deviation(&u, h).unwrap())
                .fold(0.0f64, f64::max);
            assert!(max < 1e-10);
        })
    });
}

fn bench_external_statistics(c: &mut Criterion) {
    let k = 6;
    let u = ideal_transform(k);
    let halvings = enumerate_halvings(k).unwrap();
    c.bench_function("external_statistics_k6", |b| {
        b.iter(|| {
            for h in &halvings {
                let dist = external_observer_statistics(&u, h).unwrap();
                assert_eq!(dist.len(), 64);
            }
        })
    });
}

fn bench_bell_trials(c: &mut Criterion) {
    let scenario = BellScenario::computational_pair();
    c.bench_function("bell_marginals_10k_trials", |b| {
        b.iter(|| {
            let stats = marginal_statistics(&scenario, 10_000, 42).unwrap();
            assert_eq!(stats.equal_fraction, 1.0);
        })
    });
}

fn bench_grover(c: &mut Criterion) {
    let problem = OracleProblem::new(8, BitString::from_index(0b1011_0010, 8)).unwrap();
    c.bench_function("grover_k8_success_probability", |b| {
        b.iter(|| {
            let (p, _) = grover_success_probability(&problem).unwrap();
            assert!(p > 0.9);
        })
    });
}

criterion_group!(
    benches,
    bench_reconstruction,
    bench_external_statistics,
    bench_bell_trials,
    bench_grover
);
criterion_main!(benches);
