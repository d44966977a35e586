use std::collections::BTreeSet;

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};

use treeset_core::alphabet::Word;
use treeset_core::automaton::{minimal_automaton, stallings_automaton};
use treeset_core::extension::{set_classify, ScanStrategy};
use treeset_core::factor_set::FactorSet;
use treeset_core::free_group::ReducedWord;
use treeset_core::rauzy::{rauzy_group, return_words, ReturnSide};

fn bench_build(c: &mut Criterion) {
    c.bench_function("build fibonacci N=25", |b| {
        b.iter(|| FactorSet::from_named("fibonacci", 25).unwrap())
    });
    c.bench_function("build cassaigne-neutral N=20", |b| {
        b.iter(|| FactorSet::from_named("cassaigne-neutral", 20).unwrap())
    });
}

fn bench_classify(c: &mut Criterion) {
    let s = FactorSet::from_named("cassaigne-acyclic", 20).unwrap();
    c.bench_function("classify cassaigne-acyclic up to 18", |b| {
        b.iter(|| set_classify(&s, 18, ScanStrategy::BispecialOnly).unwrap())
    });
}

fn bench_fold(c: &mut Criterion) {
    let s = FactorSet::from_named("fibonacci", 25).unwrap();
    let x: BTreeSet<Word> = s.words_of_len(6).cloned().collect();
    let min = minimal_automaton(s.alphabet(), &x).unwrap();
    c.bench_function("fold minimal automaton of S∩A⁶", |b| {
        b.iter_batched(|| min.clone(), |m| m.fold().unwrap(), BatchSize::SmallInput)
    });

    let gens: Vec<ReducedWord> = x.iter().map(ReducedWord::from_word).collect();
    c.bench_function("stallings bouquet of S∩A⁶", |b| {
        b.iter(|| stallings_automaton(s.alphabet(), &gens).unwrap())
    });
}

fn bench_returns(c: &mut Criterion) {
    let s = FactorSet::from_named("tribonacci", 30).unwrap();
    let w = s.parse("aba").unwrap();
    c.bench_function("return words tribonacci |w|=3", |b| {
        b.iter(|| return_words(&s, &w, ReturnSide::Right).unwrap())
    });

    let fib = FactorSet::from_named("fibonacci", 25).unwrap();
    let base = fib.parse("aababaa").unwrap();
    c.bench_function("rauzy group fibonacci order 7", |b| {
        b.iter(|| rauzy_group(&fib, 7, &base).unwrap())
    });
}

criterion_group!(benches, bench_build, bench_classify, bench_fold, bench_returns);
criterion_main!(benches);
