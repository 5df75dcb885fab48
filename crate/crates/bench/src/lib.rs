//! Benchmark groups for the rdlab kernels. `benches/kernels.rs` registers
//! [`benchmarks`]; run them with `cargo bench -p rdlab-bench`.

use std::hint::black_box;

use criterion::{BenchmarkId, Criterion};
use rdlab_core::acceptance::random_monic;
use rdlab_core::cubic_lines::{lines_from_one, lines_on_cubic, CubicSurface};
use rdlab_core::groups::weyl::we6;
use rdlab_core::groups::{composition_factors, PermGroup};
use rdlab_core::monodromy::{bezout_system, certify, kontsevich_nd, MonodromyOptions};
use rdlab_core::poly::{discriminant, roots, AnyPoly};
use rdlab_core::quartic_bitangents::{bitangents, classify_configurations, PlaneQuartic};
use rdlab_core::tschirnhaus::{bring_hamilton_reduce, solve_via_tower, BringHamiltonOptions};

pub fn poly(c: &mut Criterion) {
    let mut g = c.benchmark_group("poly");
    for n in [5usize, 8, 12] {
        let p = random_monic(n as u64, n);
        g.bench_with_input(BenchmarkId::new("roots", n), &p, |b, p| b.iter(|| roots(black_box(p), 1e-12)));
        g.bench_with_input(BenchmarkId::new("discriminant", n), &p, |b, p| b.iter(|| discriminant(black_box(p))));
    }
    g.finish();
}

pub fn towers(c: &mut Criterion) {
    let mut g = c.benchmark_group("tower");
    for n in [5usize, 7, 9] {
        let p: AnyPoly = random_monic(n as u64, n).into();
        g.bench_with_input(BenchmarkId::new("bring_hamilton_reduce", n), &p, |b, p| {
            b.iter(|| bring_hamilton_reduce(black_box(p), BringHamiltonOptions::default()))
        });
        let (_, tower) = bring_hamilton_reduce(&p, BringHamiltonOptions::default()).expect("generic input");
        g.bench_with_input(BenchmarkId::new("solve_via_tower", n), &tower, |b, t| b.iter(|| solve_via_tower(black_box(t))));
    }
    g.finish();
}

pub fn groups(c: &mut Criterion) {
    let mut g = c.benchmark_group("groups");
    g.bench_function("we6_order", |b| b.iter(|| we6().order()));
    let w = we6();
    w.order();
    g.bench_function("we6_composition_factors", |b| b.iter(|| composition_factors(black_box(&w))));
    g.bench_function("s8_derived_series", |b| b.iter(|| PermGroup::symmetric(8).derived_series()));
    g.finish();
}

pub fn geometry(c: &mut Criterion) {
    let mut g = c.benchmark_group("geometry");
    g.sample_size(10);
    let s = CubicSurface::random(1);
    g.bench_function("lines_on_cubic", |b| b.iter(|| lines_on_cubic(black_box(&s), 1)));
    let first = lines_on_cubic(&s, 1).expect("smooth surface").lines[0].clone();
    g.bench_function("lines_from_one", |b| b.iter(|| lines_from_one(black_box(&s), &first)));
    let q = PlaneQuartic::random(1);
    g.bench_function("bitangents", |b| b.iter(|| bitangents(black_box(&q), 1)));
    let all = bitangents(&q, 1).expect("smooth quartic");
    g.bench_function("classify_configurations", |b| b.iter(|| classify_configurations(black_box(&all))));
    g.finish();
}

pub fn monodromy(c: &mut Criterion) {
    let mut g = c.benchmark_group("monodromy");
    g.sample_size(10);
    let sys = bezout_system(2, 2).expect("valid degrees");
    let opts = MonodromyOptions { target: Some(24), ..Default::default() };
    g.bench_function("certify_bezout_2_2", |b| b.iter(|| certify(black_box(&sys), &opts, 0)));
    g.bench_function("kontsevich_40", |b| b.iter(|| kontsevich_nd(black_box(40))));
    g.finish();
}

pub fn benchmarks(c: &mut Criterion) {
    poly(c);
    towers(c);
    groups(c);
    geometry(c);
    monodromy(c);
}
