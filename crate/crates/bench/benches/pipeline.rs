use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use pizzeria_bench::fixtures;
use pizzeria_core::blowup::resolve;
use pizzeria_core::pizza::{build_pizza, decide_contact_equivalence};
use pizzeria_core::puiseux::Expansion;
use pizzeria_core::validation::automorphisms;

fn expansion(c: &mut Criterion) {
    let mut group = c.benchmark_group("expansion");
    for (name, f) in fixtures() {
        group.bench_function(name, |b| {
            b.iter(|| Expansion::new(black_box(&f)).real_arcs())
        });
    }
    group.finish();
}

fn resolution(c: &mut Criterion) {
    let mut group = c.benchmark_group("resolve");
    for (name, f) in fixtures() {
        group.bench_function(name, |b| {
            b.iter(|| resolve(black_box(&f)).expect("resolves"))
        });
    }
    group.finish();
}

fn pizza(c: &mut Criterion) {
    let mut group = c.benchmark_group("pizza");
    group.sample_size(10);
    for (name, f) in fixtures() {
        group.bench_function(name, |b| {
            b.iter(|| build_pizza(black_box(&f)).expect("builds").canonicalize())
        });
    }
    group.finish();
}

fn equivalence(c: &mut Criterion) {
    let mut group = c.benchmark_group("decide_sheared");
    group.sample_size(10);
    let shear = &automorphisms()[1];
    for (name, f) in fixtures() {
        let moved = shear.pull_back(&f);
        group.bench_function(name, |b| {
            b.iter(|| {
                decide_contact_equivalence(black_box(&f), black_box(&moved)).expect("decides")
            })
        });
    }
    group.finish();
}

criterion_group!(pipeline, expansion, resolution, pizza, equivalence);
criterion_main!(pipeline);
