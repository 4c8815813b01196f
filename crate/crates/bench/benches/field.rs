use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use salemfield::class::Classifier;
use salemfield::poly::{factor_poly, PolyQ};
use salemfield::DEFAULT_CAP;
use salemfield_bench::field;

fn arithmetic(c: &mut Criterion) {
    let mut group = c.benchmark_group("field_arithmetic");
    for (p, k, n) in [(2u64, 1u32, 12u32), (3, 2, 4), (65521, 1, 1)] {
        let spec = field(p, k, n);
        let a = spec.from_index(spec.order() / 3);
        let b = spec.from_index(spec.order() / 2 + 1);
        let id = format!("{p}^{k}^{n}");
        group.bench_with_input(BenchmarkId::new("mul", &id), &(), |bch, _| bch.iter(|| black_box(&a) * black_box(&b)));
        group.bench_with_input(BenchmarkId::new("inv", &id), &(), |bch, _| bch.iter(|| black_box(&a).inv()));
        group.bench_with_input(BenchmarkId::new("frobenius", &id), &(), |bch, _| bch.iter(|| black_box(&a).frobenius_q()));
    }
    group.finish();
}

fn factoring(c: &mut Criterion) {
    let mut group = c.benchmark_group("factor_x_n_minus_one");
    for (p, k, n) in [(2u64, 1u32, 15u32), (3, 1, 16), (2, 2, 9), (5, 1, 24)] {
        let spec = field(p, k, 1);
        let g = PolyQ::x_pow_minus_one(&spec, n as usize);
        group.bench_with_input(BenchmarkId::from_parameter(format!("q={p}^{k} n={n}")), &g, |b, g| {
            b.iter(|| factor_poly(black_box(g)))
        });
    }
    group.finish();
}

fn census(c: &mut Criterion) {
    let mut group = c.benchmark_group("census");
    group.sample_size(10);
    for (p, k, n) in [(2u64, 1u32, 10u32), (3, 1, 6), (2, 2, 5)] {
        let spec = field(p, k, n);
        let classifier = Classifier::new(&spec).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(format!("{p}^{k}^{n}")), &classifier, |b, cl| {
            b.iter(|| cl.census(DEFAULT_CAP))
        });
    }
    group.finish();
}

criterion_group!(benches, arithmetic, factoring, census);
criterion_main!(benches);
