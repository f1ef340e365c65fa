use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use levref_bench::{space, HEADLINE};
use levref_core::codes::enumerate_candidates;
use levref_core::delsarte_lp::lp_bound;
use levref_core::kkt::certify;
use levref_core::levenshtein::distance_range;
use levref_core::numkit::{int, DensePoly};
use levref_core::refine::{closed3, refined_bound, refined_bound_with, ExpansionRoute, NumericMode, Options};
use levref_core::KrawtchoukTable;

fn headline(c: &mut Criterion) {
    let mut g = c.benchmark_group("refined_bound");
    for (q, n, d) in HEADLINE {
        g.bench_with_input(BenchmarkId::from_parameter(format!("{q}-{n}-{d}")), &(q, n, d), |b, &(q, n, d)| {
            b.iter(|| refined_bound(&space(q, n), black_box(d)).unwrap())
        });
    }
    g.finish();
    c.bench_function("closed3/4-11-7", |b| b.iter(|| closed3(&space(4, 11), black_box(7)).unwrap()));
    c.bench_function("certify/4-11-7", |b| b.iter(|| certify(&space(4, 11), black_box(7)).unwrap()));
    c.bench_function("lp/4-11-7", |b| b.iter(|| lp_bound(&space(4, 11), black_box(7)).unwrap()));
}

fn expansion_routes(c: &mut Criterion) {
    let sp = space(3, 60);
    let table = KrawtchoukTable::new(sp);
    let (lo, _) = distance_range(&sp, 5).unwrap().unwrap();
    let mut g = c.benchmark_group("degree5_q3_n60");
    for (name, route) in [("triangular", ExpansionRoute::Triangular), ("grid_sum", ExpansionRoute::GridSum)] {
        let opts = Options { route, ..Options::default() };
        g.bench_function(name, |b| b.iter(|| refined_bound_with(&sp, black_box(lo), &table, &opts).unwrap()));
    }
    g.finish();
    let p = DensePoly::from_roots(&[int(-1), int(0), int(1)].map(|x| x / int(2)));
    c.bench_function("expand/cubic_n60", |b| b.iter(|| table.expand(black_box(&p)).unwrap()));
}

fn large_length(c: &mut Criterion) {
    let sp = space(2, 1000);
    let table = KrawtchoukTable::new(sp);
    let mut g = c.benchmark_group("binary_n1000_d450");
    g.sample_size(10);
    for (name, mode) in [("exact", NumericMode::Exact), ("bigfloat256", NumericMode::BigFloat { bits: 256 })] {
        let opts = Options { mode, ..Options::default() };
        g.bench_function(name, |b| b.iter(|| refined_bound_with(&sp, black_box(450), &table, &opts).unwrap()));
    }
    g.finish();
}

fn candidates(c: &mut Criterion) {
    let mut g = c.benchmark_group("enumerate_candidates");
    g.sample_size(10);
    g.bench_function("q2-5_n60", |b| b.iter(|| enumerate_candidates(black_box(&[2, 3, 4, 5]), 60).unwrap()));
    g.finish();
}

criterion_group!(benches, headline, expansion_routes, large_length, candidates);
criterion_main!(benches);
