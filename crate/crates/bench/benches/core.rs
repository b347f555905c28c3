use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use stabmap_core::cultures::{generate, Culture, CultureSpec};
use stabmap_core::mapping::{distance_matrix, kamada_kawai_embed, MapItem, Metric};
use stabmap_core::mutual_attraction::{mad_distance, mutual_attraction_matrix};
use stabmap_core::solvers::{
    irving_stable_matching, min_weight_perfect_matching, optimal_stable_matching, Objective,
};

fn ic(two_n: usize, seed: u64) -> stabmap_core::SrInstance {
    generate(&CultureSpec::new(Culture::Ic, seed), two_n).unwrap()
}

fn mad(c: &mut Criterion) {
    let mut g = c.benchmark_group("mad_distance");
    for two_n in [10, 20, 40] {
        let a = mutual_attraction_matrix(&ic(two_n, 1));
        let b = mutual_attraction_matrix(&ic(two_n, 2));
        g.bench_with_input(BenchmarkId::from_parameter(two_n), &two_n, |bch, _| {
            bch.iter(|| mad_distance(black_box(&a), black_box(&b)).unwrap())
        });
    }
    g.finish();
}

fn solvers(c: &mut Criterion) {
    let i = ic(20, 3);
    c.bench_function("irving/20", |b| b.iter(|| irving_stable_matching(black_box(i.profile()))));
    let small = ic(16, 4);
    c.bench_function("min_weight/16", |b| b.iter(|| min_weight_perfect_matching(black_box(small.profile())).unwrap()));
    let e = generate(&CultureSpec::new(Culture::Euclidean { d: 2 }, 5), 12).unwrap();
    c.bench_function("egalitarian/12", |b| {
        b.iter(|| optimal_stable_matching(black_box(e.profile()), Objective::MinSummedRank).unwrap())
    });
}

fn embedding(c: &mut Criterion) {
    let items: Vec<MapItem> = (0..60).map(|s| MapItem::sr(format!("ic-{s}"), "ic", ic(10, s))).collect();
    let d = distance_matrix(&items, Metric::Mad).unwrap();
    c.bench_function("distance_matrix/60x10", |b| b.iter(|| distance_matrix(black_box(&items), Metric::Mad).unwrap()));
    let mut g = c.benchmark_group("embed");
    g.sample_size(10);
    g.bench_function("kamada_kawai/60", |b| b.iter(|| kamada_kawai_embed(black_box(&d), 0, 500).unwrap()));
    g.finish();
}

criterion_group!(benches, mad, solvers, embedding);
criterion_main!(benches);
