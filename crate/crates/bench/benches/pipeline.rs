// SPDX-License-Identifier: Apache-2.0

use criterion::{black_box, criterion_group, criterion_main, Criterion};
use formclass::{
    conjugate_values, enumerate_classes, factor_int, has_root_mod_p, minpoly_over_q, poly_disc, siegel, Form,
    LevelStructure, Order, PrecCtx, SiegelIndex,
};
use formclass_bench::fixture;
use num_bigint::BigInt;
use num_rational::BigRational;

fn forms(c: &mut Criterion) {
    let q = Form::new(1_234_567, 2_345_671, 1_115_827);
    c.bench_function("reduce_form", |b| b.iter(|| black_box(&q).reduce()));
    let order = Order::from_disc(&BigInt::from(-200)).unwrap();
    let level = LevelStructure::trivial(3).unwrap();
    c.bench_function("enumerate_classes_d200_n3", |b| b.iter(|| enumerate_classes(&order, &level).unwrap()));
    c.bench_function("composition_table_d200_n3", |b| {
        b.iter(|| enumerate_classes(&order, &level).unwrap().with_table().unwrap())
    });
}

fn analytic(c: &mut Criterion) {
    let ctx = PrecCtx::default();
    let tau = Form::new(1, 1, 7).root(&ctx);
    let v = SiegelIndex::new(BigRational::from_integer(0.into()), BigRational::new(1.into(), 2.into())).unwrap();
    c.bench_function("siegel_200_digits", |b| b.iter(|| siegel(&v, black_box(&tau), &ctx)));
    let (cg, spec) = fixture(-27, 2);
    c.bench_function("conjugate_values_d27_n2", |b| b.iter(|| conjugate_values(&cg, &spec, &ctx).unwrap()));
    c.bench_function("minpoly_d27_n2", |b| b.iter(|| minpoly_over_q(&cg, &spec, &ctx).unwrap()));
    let (cg, spec) = fixture(-180, 2);
    let mut g = c.benchmark_group("slow");
    g.sample_size(10);
    g.bench_function("minpoly_d180_n2", |b| b.iter(|| minpoly_over_q(&cg, &spec, &ctx).unwrap()));
    g.finish();
}

fn exact(c: &mut Criterion) {
    let (cg, spec) = fixture(-180, 2);
    let f = minpoly_over_q(&cg, &spec, &PrecCtx::default()).unwrap().minpoly;
    c.bench_function("poly_disc_degree16", |b| b.iter(|| poly_disc(black_box(&f)).unwrap()));
    let disc = poly_disc(&f).unwrap();
    let mut g = c.benchmark_group("slow_exact");
    g.sample_size(10);
    g.bench_function("factor_disc_degree16", |b| b.iter(|| factor_int(black_box(&disc), None)));
    g.finish();
    c.bench_function("root_mod_p_degree16", |b| b.iter(|| has_root_mod_p(black_box(&f), 19_997).unwrap()));
}

criterion_group!(benches, forms, analytic, exact);
criterion_main!(benches);
