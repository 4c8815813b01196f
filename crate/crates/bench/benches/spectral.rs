use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use salemfield::class::{find_primitive_normal, LogTable};
use salemfield::spectral::{dft_zmod, pn_spectrum, TijContext};
use salemfield::DEFAULT_CAP;
use salemfield_bench::{field, signal};

fn transforms(c: &mut Criterion) {
    let mut group = c.benchmark_group("dft_zmod");
    for m in [64usize, 256, 1024] {
        let f = signal(m);
        group.bench_with_input(BenchmarkId::from_parameter(m), &f, |b, f| b.iter(|| dft_zmod(black_box(f))));
    }
    group.finish();
}

fn logs(c: &mut Criterion) {
    let mut group = c.benchmark_group("discrete_log");
    let spec = field(2, 1, 16);
    let tau = find_primitive_normal(&spec);
    let full = LogTable::full(&tau).unwrap();
    let bsgs = LogTable::bsgs(&tau).unwrap();
    let a = spec.from_index(40_000);
    group.bench_function("full_table", |b| b.iter(|| full.log(black_box(&a))));
    group.bench_function("bsgs", |b| b.iter(|| bsgs.log(black_box(&a))));
    group.finish();
}

fn primitive_normal(c: &mut Criterion) {
    let mut group = c.benchmark_group("primitive_normal");
    group.sample_size(10);
    for (p, n) in [(2u64, 8u32), (3, 5)] {
        let spec = field(p, 1, n);
        group.bench_with_input(BenchmarkId::new("spectrum", spec.order()), &spec, |b, s| {
            b.iter(|| pn_spectrum(s, DEFAULT_CAP))
        });
        let ctx = TijContext::new(&spec, DEFAULT_CAP).unwrap();
        let beta = spec.from_index(5);
        group.bench_with_input(BenchmarkId::new("tij_one_beta", spec.order()), &beta, |b, beta| {
            b.iter(|| ctx.decompose(black_box(beta)))
        });
    }
    group.finish();
}

criterion_group!(benches, transforms, logs, primitive_normal);
criterion_main!(benches);
