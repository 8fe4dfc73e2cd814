use arcgrid_core::invariants::{jones, KauffmanEngine};
use arcgrid_core::{enumerate_grids, filtered_trees, parse_dt, present, realize, search_min_grid, Diagram};
use criterion::{black_box, criterion_group, criterion_main, Criterion};

const K14N10: &str = "14n10 4 8 10 -14 2 -16 -20 -6 24 -12 26 18 28 22";
const K14N201: &str = "14n201 4 8 10 14 2 -20 6 22 24 26 -12 28 18 16";

fn knot(line: &str) -> Diagram {
    realize(&parse_dt(line).unwrap()).unwrap()
}

fn invariants(c: &mut Criterion) {
    let d = knot(K14N201);
    c.bench_function("jones 14n201", |b| b.iter(|| jones(black_box(&d))));
    c.bench_function("kauffman 14n201", |b| b.iter(|| KauffmanEngine::default().kauffman_f(black_box(&d)).unwrap()));
}

fn presentation(c: &mut Criterion) {
    let d = knot(K14N10);
    let t = filtered_trees(&d, 1).unwrap().next().unwrap();
    c.bench_function("present 14n10", |b| b.iter(|| present(black_box(&d), &t).unwrap()));
    let mut group = c.benchmark_group("search");
    group.sample_size(10);
    group.bench_function("14n10 to 13", |b| b.iter(|| search_min_grid(black_box(&d), 13, 10_000).unwrap()));
    group.finish();
}

fn enumeration(c: &mut Criterion) {
    let mut group = c.benchmark_group("enumerate");
    group.sample_size(10);
    group.bench_function("size 6", |b| b.iter(|| enumerate_grids(6).unwrap().count()));
    group.finish();
}

criterion_group!(benches, invariants, presentation, enumeration);
criterion_main!(benches);
