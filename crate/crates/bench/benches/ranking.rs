use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use perfclass::{compare, score_sorted, sort_dataset, CompareConfig, HyperParams, SampleSize};
use perfclass_bench::fixture;
use std::hint::black_box;

fn bench_compare(c: &mut Criterion) {
    let d = fixture(2, 50, 1);
    let mut group = c.benchmark_group("compare");
    for m in [1, 30, 300] {
        let cfg = CompareConfig::from_params(&HyperParams {
            m_iters: m,
            ..Default::default()
        });
        group.bench_with_input(BenchmarkId::from_parameter(m), &cfg, |b, cfg| {
            b.iter(|| compare(black_box(d.times(0)), black_box(d.times(1)), cfg).unwrap())
        });
    }
    group.finish();
}

fn bench_sort(c: &mut Criterion) {
    let mut group = c.benchmark_group("sort");
    for p in [4, 16, 64] {
        let d = fixture(p, 50, 2);
        group.bench_with_input(BenchmarkId::from_parameter(p), &d, |b, d| {
            b.iter(|| sort_dataset(d, &HyperParams::default()).unwrap())
        });
    }
    group.finish();
}

fn bench_score(c: &mut Criterion) {
    let d = fixture(8, 50, 3);
    let mut group = c.benchmark_group("score_sorted");
    group.sample_size(10);
    for k in [5, 10, 25] {
        let params = HyperParams {
            sample_k: SampleSize::Fixed(k),
            ..Default::default()
        };
        group.bench_with_input(BenchmarkId::from_parameter(k), &params, |b, params| {
            b.iter(|| score_sorted(&d, params).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_compare, bench_sort, bench_score);
criterion_main!(benches);
