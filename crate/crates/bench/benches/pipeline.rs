use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use k3bhcr::groups::{intermediate_subgroups, sl_group};
use k3bhcr::{build_catalog, nikulin_triple, quotient_triple};
use k3bhcr_bench::{potential, sextic_full_group, POTENTIALS};
use std::hint::black_box;

fn triples(c: &mut Criterion) {
    let mut g = c.benchmark_group("nikulin_triple");
    for (shape, f) in POTENTIALS {
        let p = potential(f);
        g.bench_with_input(BenchmarkId::from_parameter(shape), &p, |b, p| b.iter(|| nikulin_triple(black_box(p))));
    }
    g.finish();
}

fn groups(c: &mut Criterion) {
    let p = potential("y^6+z^6+w^6");
    c.bench_function("sl_group/sextic", |b| b.iter(|| sl_group(black_box(&p))));
    c.bench_function("intermediate_subgroups/sextic", |b| b.iter(|| intermediate_subgroups(black_box(&p))));
}

fn quotients(c: &mut Criterion) {
    let (p, g) = sextic_full_group();
    c.bench_function("quotient_triple/sextic_full", |b| b.iter(|| quotient_triple(black_box(&p), black_box(&g))));
}

fn catalog(c: &mut Criterion) {
    let mut g = c.benchmark_group("catalog");
    g.sample_size(10);
    g.bench_function("build_catalog/66", |b| b.iter(|| build_catalog(black_box(66))));
    g.finish();
}

criterion_group!(benches, triples, groups, quotients, catalog);
criterion_main!(benches);
