use criterion::{black_box, criterion_group, criterion_main, Criterion};

use ddeg_core::algebraic::isolate_real_roots;
use ddeg_core::config::{Budget, JobConfig};
use ddeg_core::degree::dynamical_degree;
use ddeg_core::dim3::enumerate_theorem1_set;
use ddeg_core::matrices::eigen_candidates;
use ddeg_core::text::parse_endomorphism;
use ddeg_core::unipoly::IntPoly;

fn bench_composition(c: &mut Criterion) {
    let f = parse_endomorphism("(x3 + x1*x2, x2 + x1^3, x1)").unwrap();
    c.bench_function("iterate_depth5", |b| {
        b.iter(|| black_box(&f).iterate(5, &Budget::unlimited()).unwrap())
    });
}

fn bench_root_isolation(c: &mut Criterion) {
    // Wilkinson-flavoured stress: product of quadratics
    let mut p = IntPoly::from_i64(&[-1, -1, 1]);
    for k in 2..=6i64 {
        p = p.mul(&IntPoly::from_i64(&[-k, -1, 1]));
    }
    c.bench_function("isolate_real_roots_deg12", |b| {
        b.iter(|| isolate_real_roots(black_box(&p)))
    });
}

fn bench_maximal_eigenvalue(c: &mut Criterion) {
    let f =
        parse_endomorphism("(x1^2 + x2, x1, x3 + (x3 + x4)^2, x4 - (x3 + x4)^2)").unwrap();
    c.bench_function("eigen_candidates_a4", |b| {
        b.iter(|| eigen_candidates(black_box(&f), 1_000_000).unwrap())
    });
}

fn bench_driver(c: &mut Criterion) {
    let cfg = JobConfig::default();
    let f = parse_endomorphism("(x3 + x1*x2, x2 + x1^3, x1)").unwrap();
    c.bench_function("dynamical_degree_a3", |b| {
        b.iter(|| dynamical_degree(black_box(&f), &cfg).unwrap())
    });
}

fn bench_enumeration(c: &mut Criterion) {
    c.bench_function("theorem1_set_d4", |b| {
        b.iter(|| enumerate_theorem1_set(black_box(4)))
    });
}

criterion_group!(
    benches,
    bench_composition,
    bench_root_isolation,
    bench_maximal_eigenvalue,
    bench_driver,
    bench_enumeration
);
criterion_main!(benches);
