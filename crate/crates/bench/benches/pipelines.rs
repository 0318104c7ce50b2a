//! End-to-end pipeline benchmarks on the bundled fixtures and seeded
//! random instances.

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};

use buffsim_core::{
    build_bounded_buffer_arena, build_monoid, decide, fixtures, language_inclusion, randgen,
    solve, Acceptance, BufferMode, DisjointUnion, QuotientRelation, DEFAULT_CAP,
};

fn bench_monoid_build(c: &mut Criterion) {
    let (a, b) = fixtures::branching();
    let union = DisjointUnion::new(&a, &b).unwrap();
    c.bench_function("monoid/branching-union", |bench| {
        bench.iter(|| build_monoid(&union.nba, DEFAULT_CAP).unwrap().len())
    });

    let mut r = randgen::rng(11);
    let random = randgen::random_nba(&mut r, 5, 2);
    c.bench_function("monoid/random-5-state", |bench| {
        bench.iter(|| build_monoid(&random, DEFAULT_CAP).unwrap().len())
    });
}

fn bench_quotient_solve(c: &mut Criterion) {
    let (a, b) = fixtures::branching();
    c.bench_function("quotient/lookahead-fair-branching", |bench| {
        bench.iter(|| decide(&a, &b, QuotientRelation::LookaheadFair, DEFAULT_CAP).unwrap())
    });
    c.bench_function("quotient/continuous-fair-branching", |bench| {
        bench.iter(|| decide(&a, &b, QuotientRelation::ContinuousFair, DEFAULT_CAP).unwrap())
    });
}

fn bench_bounded_game(c: &mut Criterion) {
    let (a, b) = fixtures::branching();
    c.bench_function("bounded/k3-lookahead-fair-branching", |bench| {
        bench.iter_batched(
            || (),
            |_| {
                let arena = build_bounded_buffer_arena(
                    &a,
                    &b,
                    3,
                    BufferMode::Lookahead,
                    Acceptance::Fair,
                    DEFAULT_CAP,
                )
                .unwrap();
                solve(&arena).holds
            },
            BatchSize::SmallInput,
        )
    });
}

fn bench_inclusion(c: &mut Criterion) {
    let (a, b) = fixtures::inclusion_gap();
    c.bench_function("inclusion/inclusion-gap", |bench| {
        bench.iter(|| language_inclusion(&a, &b, DEFAULT_CAP).unwrap().is_included())
    });
}

criterion_group!(
    pipelines,
    bench_monoid_build,
    bench_quotient_solve,
    bench_bounded_game,
    bench_inclusion
);
criterion_main!(pipelines);
