use std::hint::black_box;
use std::sync::Arc;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use loopspace::catalog;
use loopspace::classify::{census_classes, classify_family_with};
use loopspace::covers::count_homs_with;
use loopspace::curve::classify;
use loopspace::par::{self, Strategy};
use loopspace::{rat, DEFAULT_TERMS};

const STRATEGIES: [(&str, Strategy); 2] = [("sequential", Strategy::Sequential), ("parallel", Strategy::Parallel)];

fn homs(c: &mut Criterion) {
    let mut group = c.benchmark_group("count_homs");
    group.sample_size(10);
    for (g, n) in [(1, 5), (2, 4)] {
        for (name, strategy) in STRATEGIES {
            group.bench_with_input(BenchmarkId::new(name, format!("g{g}_S{n}")), &(g, n), |b, &(g, n)| {
                b.iter(|| count_homs_with(strategy, black_box(g), black_box(n)).unwrap())
            });
        }
    }
    group.finish();
}

fn census(c: &mut Criterion) {
    let curve = Arc::new(catalog::quartic());
    let mut rng = catalog::rng(5);
    let loops: Vec<_> = census_classes(&curve)
        .into_iter()
        .flat_map(|q| (0..40).map(move |_| q))
        .map(|q| catalog::random_loop(&mut rng, &curve, Some(q), DEFAULT_TERMS).unwrap().0)
        .collect();
    let mut group = c.benchmark_group("classify_loops");
    for (name, strategy) in STRATEGIES {
        group.bench_function(name, |b| b.iter(|| par::map(strategy, &loops, |lp| classify(lp).unwrap())));
    }
    group.finish();
}

fn families(c: &mut Criterion) {
    let curve = Arc::new(catalog::cubic());
    let fam = catalog::random_family(&mut catalog::rng(9), &curve, 12).unwrap();
    let ts: Vec<_> = (-16..16).map(|k| rat(k, 3)).collect();
    let mut group = c.benchmark_group("classify_family");
    group.sample_size(10);
    for (name, strategy) in STRATEGIES {
        group.bench_function(name, |b| b.iter(|| classify_family_with(strategy, &fam, &ts).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, homs, census, families);
criterion_main!(benches);
