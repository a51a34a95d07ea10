use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BatchSize, Criterion, Throughput};
use xfervocab::bpe::{learn_bpe, word_counts};
use xfervocab::eval::{corpus_bleu, paired_bootstrap, BleuConfig, BootstrapConfig, Tokenize};
use xfervocab::synthetic::LanguageSpec;
use xfervocab::transfer::remap_vocab;
use xfervocab::wordpiece::{apply_wordpiece, WordpieceTrainer};
use xfervocab::Variant;
use xfervocab_bench::{corpus, degrade, vocab};

fn wordpiece(c: &mut Criterion) {
    let train = corpus(LanguageSpec::latin(), 5_000, 1);
    let v = vocab(&train, 2_000);
    let text: Vec<String> = train.iter().map(str::to_string).collect();
    let bytes: usize = text.iter().map(String::len).sum();

    let mut g = c.benchmark_group("wordpiece");
    g.throughput(Throughput::Bytes(bytes as u64));
    g.bench_function("apply", |b| {
        b.iter(|| text.iter().map(|s| apply_wordpiece(&v, s).len()).sum::<usize>())
    });
    g.sample_size(10);
    g.bench_function("build_at_min_count", |b| {
        b.iter_batched(
            || WordpieceTrainer::new(std::slice::from_ref(&train), usize::MAX, 4).unwrap(),
            |t| t.build(black_box(5)).len(),
            BatchSize::LargeInput,
        )
    });
    g.finish();
}

fn bpe(c: &mut Criterion) {
    let train = corpus(LanguageSpec::latin_diacritics(), 5_000, 2);
    let words: u64 = word_counts([&train]).values().sum();
    let mut g = c.benchmark_group("bpe");
    g.sample_size(10);
    g.throughput(Throughput::Elements(words));
    for merges in [500, 2_000] {
        g.bench_function(format!("learn_{merges}"), |b| {
            b.iter(|| {
                learn_bpe(std::slice::from_ref(&train), black_box(merges))
                    .unwrap()
                    .len()
            })
        });
    }
    g.finish();
}

fn transfer(c: &mut Criterion) {
    let parent = vocab(&corpus(LanguageSpec::latin(), 5_000, 3), 2_000);
    let child = vocab(&corpus(LanguageSpec::latin_diacritics(), 5_000, 4), 2_000);
    let mut g = c.benchmark_group("transfer");
    g.sample_size(10);
    for variant in Variant::ALL {
        g.bench_function(variant.name(), |b| {
            b.iter(|| remap_vocab(&parent, &child, variant, Some(7)).unwrap().len())
        });
    }
    g.finish();
}

fn eval(c: &mut Criterion) {
    let refs = corpus(LanguageSpec::latin(), 2_000, 5);
    let reference: Vec<String> = refs.iter().map(str::to_string).collect();
    let hyp_a = degrade(&refs, 5);
    let hyp_b = degrade(&refs, 3);
    let cfg = BleuConfig::default();

    let mut g = c.benchmark_group("eval");
    g.throughput(Throughput::Elements(reference.len() as u64));
    g.bench_function("corpus_bleu", |b| {
        b.iter(|| {
            corpus_bleu(&hyp_a, std::slice::from_ref(&reference), &cfg)
                .unwrap()
                .score
        })
    });
    let pretokenized = BleuConfig {
        tokenize: Tokenize::None,
        ..BleuConfig::default()
    };
    g.bench_function("corpus_bleu_pretokenized", |b| {
        b.iter(|| {
            corpus_bleu(&hyp_a, std::slice::from_ref(&reference), &pretokenized)
                .unwrap()
                .score
        })
    });
    g.sample_size(10);
    g.bench_function("paired_bootstrap_1000", |b| {
        b.iter(|| {
            paired_bootstrap(&hyp_a, &hyp_b, &reference, &BootstrapConfig::new(1))
                .unwrap()
                .wins_a
        })
    });
    g.finish();
}

criterion_group!(benches, wordpiece, bpe, transfer, eval);
criterion_main!(benches);
