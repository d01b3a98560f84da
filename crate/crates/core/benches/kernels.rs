//! Partition engines and checks on a one-thread pool against the default pool.
//! Build with `--no-default-features` to time the plain sequential loops.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rayon::ThreadPool;

use tamereg::graph::{generate, Family};
use tamereg::measures::WeightedMeasure;
use tamereg::partition::{distal_partition, nip_partition, stable_partition, NipOptions, StableOptions};
use tamereg::ratio::ratio;
use tamereg::tameness::{vc_dimension, TraceSide};
use tamereg::verify::{check_nip, check_stable};
use tamereg::{BipartiteGraph, Side};

fn pools() -> Vec<(&'static str, ThreadPool)> {
    let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let all = rayon::ThreadPoolBuilder::new().build().unwrap();
    vec![("1-thread", one), ("pool", all)]
}

fn uniform(g: &BipartiteGraph) -> (WeightedMeasure, WeightedMeasure) {
    (
        WeightedMeasure::uniform(g, Side::V).unwrap(),
        WeightedMeasure::uniform(g, Side::W).unwrap(),
    )
}

fn stable(c: &mut Criterion) {
    let g = generate(&Family::Interval { n: 800, m: 800, s: 1, seed: 0 }).unwrap();
    let (mu, _) = uniform(&g);
    let eps = ratio(1, 10);
    let p = stable_partition(&g, &eps, &mu, &StableOptions::default()).unwrap();
    let mut group = c.benchmark_group("stable");
    group.sample_size(10);
    for (name, pool) in pools() {
        group.bench_function(BenchmarkId::new("partition", name), |b| {
            b.iter(|| pool.install(|| stable_partition(&g, &eps, &mu, &StableOptions::default()).unwrap()))
        });
        group.bench_function(BenchmarkId::new("check", name), |b| {
            b.iter(|| pool.install(|| check_stable(&g, &p, &eps, &mu).unwrap()))
        });
    }
    group.finish();
}

fn nip(c: &mut Criterion) {
    let g = generate(&Family::Interval { n: 400, m: 400, s: 2, seed: 0 }).unwrap();
    let (mu, nu) = uniform(&g);
    let eps = ratio(1, 10);
    let p = nip_partition(&g, &eps, &mu, &nu, 0, &NipOptions::default()).unwrap();
    let mut group = c.benchmark_group("nip");
    group.sample_size(10);
    for (name, pool) in pools() {
        group.bench_function(BenchmarkId::new("partition", name), |b| {
            b.iter(|| pool.install(|| nip_partition(&g, &eps, &mu, &nu, 0, &NipOptions::default()).unwrap()))
        });
        group.bench_function(BenchmarkId::new("check", name), |b| {
            b.iter(|| pool.install(|| check_nip(&g, &p, &eps, &mu, &nu).unwrap()))
        });
        group.bench_function(BenchmarkId::new("vc", name), |b| {
            b.iter(|| pool.install(|| vc_dimension(&g, 8, TraceSide::ColumnsOnV)))
        });
    }
    group.finish();
}

fn distal(c: &mut Criterion) {
    let g = generate(&Family::Interval { n: 1000, m: 1000, s: 1, seed: 0 }).unwrap();
    let eps = ratio(1, 10);
    let mut group = c.benchmark_group("distal");
    group.sample_size(10);
    for (name, pool) in pools() {
        group.bench_function(BenchmarkId::new("partition", name), |b| {
            b.iter(|| pool.install(|| distal_partition(&g, &eps).unwrap()))
        });
    }
    group.finish();
}

criterion_group!(benches, stable, nip, distal);
criterion_main!(benches);
