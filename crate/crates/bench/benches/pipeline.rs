use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use hc_bench::{first_command, negation_chain, PARALLEL};
use hc_core::equations::{decide_eq, normalize, NormConfig};
use hc_core::semantics::lint::lint_table;
use hc_core::semantics::{model_lint, FinRel, TableModel, TableSmc};
use hc_core::syntaxgen::{round_trip_check, syntax_gen, Caps};

fn typing(c: &mut Criterion) {
    let (theory, ctx, term) = first_command(PARALLEL);
    let env = theory.env();
    c.bench_function("check parallel", |b| {
        b.iter(|| env.check_term(&ctx, black_box(&term), None).unwrap())
    });
    c.bench_function("load parallel", |b| {
        b.iter(|| first_command(black_box(PARALLEL)))
    });
}

fn equations(c: &mut Criterion) {
    let mut group = c.benchmark_group("normalize chain");
    for n in [4, 16, 64] {
        let (theory, ctx, term) = first_command(&negation_chain(n));
        let env = theory.env();
        group.bench_with_input(BenchmarkId::from_parameter(n), &term, |b, t| {
            b.iter(|| normalize(&env, &ctx, t, &NormConfig::default()).unwrap())
        });
    }
    group.finish();

    let (theory, ctx, lhs) = first_command(&negation_chain(16));
    let (_, _, rhs) = first_command(&negation_chain(16));
    let env = theory.env();
    let ty = env.check_term(&ctx, &lhs, None).unwrap();
    c.bench_function("decide_eq chain 16", |b| {
        b.iter(|| {
            decide_eq(
                &env,
                &ctx,
                &lhs,
                black_box(&rhs),
                &ty,
                None,
                &NormConfig::default(),
            )
        })
    });
}

fn models(c: &mut Criterion) {
    let finrel = FinRel::new(2).unwrap();
    let mut group = c.benchmark_group("lint");
    group.sample_size(10);
    group.bench_function("finrel 2", |b| b.iter(|| model_lint(black_box(&finrel))));
    let trivial = TableSmc::new(TableModel::trivial()).unwrap();
    group.bench_function("trivial table", |b| {
        b.iter(|| lint_table(black_box(&trivial)))
    });
    group.finish();

    let two = FinRel::with_objects(vec![Vec::new(), vec!["*".to_string()]]);
    let mut group = c.benchmark_group("extraction");
    group.sample_size(10);
    group.bench_function("syntax_gen two objects", |b| {
        b.iter(|| syntax_gen(black_box(&two), &Caps::default()).unwrap())
    });
    group.bench_function("round trip two objects", |b| {
        b.iter(|| round_trip_check(black_box(&two), &Caps::default()).unwrap())
    });
    group.finish();
}

criterion_group!(pipeline, typing, equations, models);
criterion_main!(pipeline);
