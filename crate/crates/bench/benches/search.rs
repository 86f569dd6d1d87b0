use criterion::{black_box, criterion_group, criterion_main, Criterion};

use tripost::generator::canonicalize;
use tripost::{analyze, filter_pair, search_triple, Game, PairSystem, SearchBounds, Word};
use tripost_bench::{small_corpus, sys1};

fn bench_search(c: &mut Criterion) {
    let system = sys1();
    let bounds = SearchBounds::default();
    c.bench_function("search_triple sys1", |b| {
        b.iter(|| search_triple(black_box(&system), &bounds).unwrap())
    });

    let projection = system.project(Game::TopMiddle).unwrap();
    c.bench_function("filter_pair sys1 tm", |b| {
        b.iter(|| filter_pair(black_box(&projection)))
    });

    // unbounded growth; runs until the overhang bound fires
    let growing = PairSystem::from_strs(&[("a", "aab"), ("ba", "a"), ("b", "ab")]).unwrap();
    let tight = SearchBounds::new(32, 24, 200_000).unwrap();
    c.bench_function("search_pair overhang-bound", |b| {
        b.iter(|| tripost::search_pair(black_box(&growing), &tight).unwrap())
    });

    let wide = PairSystem::new(
        tripost::Alphabet::new("abcd").unwrap(),
        ["abcd", "dcba", "aabb", "ccdd", "abab", "cdcd", "dada"]
            .iter()
            .zip(["bcda", "adcb", "bbaa", "ddcc", "baba", "dcdc", "adad"])
            .map(|(a, b)| (Word::from(*a), Word::from(b)))
            .collect(),
    )
    .unwrap();
    c.bench_function("balance filter 7 pairs dim 4", |b| {
        b.iter(|| filter_pair(black_box(&wide)))
    });
}

fn bench_analyze(c: &mut Criterion) {
    let corpus = small_corpus();
    let bounds = SearchBounds::new(16, 16, 10_000).unwrap();
    let sample: Vec<_> = corpus.iter().step_by(97).cloned().collect();
    c.bench_function("analyze corpus sample", |b| {
        b.iter(|| {
            for s in &sample {
                black_box(analyze(s, &bounds).unwrap());
            }
        })
    });
    c.bench_function("canonicalize sys1", |b| {
        b.iter(|| canonicalize(black_box(&sys1())))
    });
}

criterion_group!(benches, bench_search, bench_analyze);
criterion_main!(benches);
