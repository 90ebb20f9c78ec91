use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use modinv::cpaction::decompose_component;
use modinv::paths::{count_tables, tensor_decomposition};
use modinv::sagbi::{build_generators, sagbi_verify};
use modinv::sl2::minimal_generators_sl2;
use modinv::{FpMatrix, MultiDegree, Prime, SetKind, Sl2Config};
use std::hint::black_box;

fn pr(p: u64) -> Prime {
    Prime::new(p).unwrap()
}

fn rref(c: &mut Criterion) {
    let p = pr(7);
    let rows: Vec<Vec<i64>> = (0..120)
        .map(|i| (0..120).map(|j| (i * 31 + j * 17 + i * j) % 7).collect())
        .collect();
    let a = FpMatrix::from_rows(&rows, p).unwrap();
    c.bench_function("rref 120x120 over F_7", |b| b.iter(|| black_box(&a).rref()));
}

fn decompose(c: &mut Criterion) {
    let mut g = c.benchmark_group("decompose_component");
    for (p, parts) in [
        (7u64, vec![1u32, 1, 1, 2]),
        (5, vec![6, 1, 1, 7]),
        (3, vec![4, 4, 2]),
    ] {
        let lambda = MultiDegree::new(parts);
        g.bench_with_input(
            BenchmarkId::new(format!("p{p}"), format!("{:?}", lambda.parts())),
            &lambda,
            |b, l| b.iter(|| decompose_component(l, pr(p))),
        );
    }
    g.finish();
}

fn tensor(c: &mut Criterion) {
    let mut g = c.benchmark_group("tensor_decomposition");
    for d in [6usize, 10, 14] {
        g.bench_with_input(BenchmarkId::from_parameter(d), &d, |b, &d| {
            b.iter(|| tensor_decomposition(d, pr(5)))
        });
    }
    g.finish();
    c.bench_function("count_tables p=7 d<=40", |b| {
        b.iter(|| count_tables(40, pr(7)))
    });
}

fn sagbi(c: &mut Criterion) {
    let gens = build_generators(pr(3), 3, SetKind::Minimal);
    let lambda = MultiDegree::new(vec![2, 2, 2]);
    c.bench_function("sagbi_verify p=3 (2,2,2)", |b| {
        b.iter(|| sagbi_verify(&lambda, &gens))
    });
}

fn sl2(c: &mut Criterion) {
    let mut g = c.benchmark_group("minimal_generators_sl2");
    g.sample_size(10);
    g.bench_function("p=3 m=3 d<=9", |b| {
        b.iter(|| minimal_generators_sl2(pr(3), 3, &Sl2Config::new(9)).unwrap())
    });
    g.finish();
}

criterion_group!(benches, rref, decompose, tensor, sagbi, sl2);
criterion_main!(benches);
