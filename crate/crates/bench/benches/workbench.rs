//! Benchmarks for the three hot paths: exhaustive jet counting, series
//! expansion of a rational zeta function, and partial-fraction
//! decomposition.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use motzeta_core::pole::partial_fractions;
use motzeta_core::{count_jets, denef_loeser, CountConfig, ResolutionData};

fn cfg() -> CountConfig {
    CountConfig {
        budget: 1_000_000_000,
        jobs: 0,
    }
}

fn resolution(name: &str) -> ResolutionData {
    motzeta_core::builtin(name)
        .unwrap()
        .resolution()
        .unwrap()
        .unwrap()
}

fn bench_jet_counting(c: &mut Criterion) {
    let cusp = motzeta_core::builtin("cusp").unwrap().polynomial().unwrap();
    let mut group = c.benchmark_group("count_jets_cusp_q3");
    for n in [3usize, 4, 5] {
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| count_jets(&cusp, n, 3, &cfg()).unwrap())
        });
    }
    group.finish();
}

fn bench_series_expansion(c: &mut Criterion) {
    let z = denef_loeser(&resolution("x2y3")).unwrap();
    let mut group = c.benchmark_group("expand_x2y3");
    for nmax in [20usize, 40, 80] {
        group.bench_with_input(BenchmarkId::from_parameter(nmax), &nmax, |b, &nmax| {
            b.iter(|| z.expand(nmax))
        });
    }
    group.finish();
}

fn bench_partial_fractions(c: &mut Criterion) {
    let mut group = c.benchmark_group("partial_fractions");
    for name in ["x2", "xy", "x2y3"] {
        let z = denef_loeser(&resolution(name)).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(name), &z, |b, z| {
            b.iter(|| partial_fractions(z, 2).unwrap())
        });
    }
    group.finish();
}

criterion_group!(
    benches,
    bench_jet_counting,
    bench_series_expansion,
    bench_partial_fractions
);
criterion_main!(benches);
