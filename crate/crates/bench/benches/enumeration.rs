use std::hint::black_box;

use blichfeldt_bench::{hulls, simplex, skewed_lattice};
use blichfeldt_core::harness::check;
use blichfeldt_core::{count, CheckOptions, CountOptions, InequalityId};
use criterion::{criterion_group, criterion_main, BatchSize, Criterion};

fn counting(c: &mut Criterion) {
    let opts = CountOptions::default();
    let mut g = c.benchmark_group("count");
    for (n, k) in [(3, 20), (4, 10), (5, 6)] {
        let b = simplex(n, k).unwrap();
        g.bench_function(format!("simplex n={n} k={k}"), |bch| bch.iter(|| count(black_box(&b), &opts).unwrap()));
    }
    let items = hulls(3, 8).unwrap();
    g.bench_function("random hulls n=3 x8", |bch| {
        bch.iter(|| {
            for it in &items {
                black_box(count(&it.body, &opts).unwrap());
            }
        })
    });
    g.finish();
}

fn lattice(c: &mut Criterion) {
    let mut g = c.benchmark_group("lattice");
    for n in [2, 3, 4] {
        let l = skewed_lattice(n).unwrap();
        // clones start with empty caches
        g.bench_function(format!("shortest vector n={n}"), |b| {
            b.iter_batched(|| l.clone(), |l| l.shortest_vector().unwrap(), BatchSize::SmallInput)
        });
        g.bench_function(format!("covering radius n={n}"), |b| {
            b.iter_batched(|| l.clone(), |l| l.covering_radius_sq().unwrap(), BatchSize::SmallInput)
        });
    }
    g.finish();
}

fn checking(c: &mut Criterion) {
    let opts = CheckOptions::default();
    let b = simplex(3, 7).unwrap();
    let mut g = c.benchmark_group("check");
    g.sample_size(20);
    for id in [InequalityId::MainThm11, InequalityId::Overhagen33, InequalityId::GeneralThm41] {
        g.bench_function(id.name(), |bch| bch.iter(|| check(id, black_box(&b), &opts).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, counting, lattice, checking);
criterion_main!(benches);
