use std::hint::black_box;

use agw_core::fixtures;
use agw_core::{closure_of, compose, copycat, innocence_check, interact, scheduling_check, strategy_of};
use criterion::{criterion_group, criterion_main, Criterion};

fn games(c: &mut Criterion) {
    c.bench_function("interpret (B * B) -o B", |b| b.iter(fixtures::and_game));
    let g = fixtures::and_game();
    c.bench_function("structural report of (B * B) -o B", |b| b.iter(|| g.graph().structural_report(g.root())));
    c.bench_function("copycat on B * B", |b| b.iter(|| copycat(black_box(&fixtures::bb_game())).unwrap()));
}

fn interaction(c: &mut Criterion) {
    let sigma = fixtures::sigma();
    let and_p = fixtures::and_p();
    c.bench_function("interact sigma and_p", |b| b.iter(|| interact(&sigma, &and_p).unwrap()));
    c.bench_function("compose sigma and_p", |b| b.iter(|| compose(&sigma, &and_p).unwrap()));
}

fn criteria(c: &mut Criterion) {
    let sigma = fixtures::sigma();
    c.bench_function("scheduling sigma", |b| b.iter(|| scheduling_check(&sigma)));
    let over_par = fixtures::lift_corpus().into_iter().find(|f| f.strategy.name() == "over_par").unwrap();
    c.bench_function("innocence over_par", |b| {
        b.iter(|| innocence_check(&over_par.strategy, &over_par.formula).unwrap())
    });
}

fn closures(c: &mut Criterion) {
    let and_p = fixtures::and_p();
    c.bench_function("closure of and_p", |b| b.iter(|| closure_of(&and_p).unwrap()));
    let tau = closure_of(&fixtures::sigma()).unwrap();
    c.bench_function("strategy of the sigma closure", |b| b.iter(|| strategy_of(&tau, "sigma").unwrap()));
}

criterion_group!(benches, games, interaction, criteria, closures);
criterion_main!(benches);
