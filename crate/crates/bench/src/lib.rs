//! Fixtures shared by the benchmarks in `benches/`.

use xfervocab::synthetic::{Language, LanguageSpec};
use xfervocab::wordpiece::{learn_wordpiece, VocabSpec, Vocabulary};
use xfervocab::Corpus;

pub fn corpus(spec: LanguageSpec, sentences: usize, seed: u64) -> Corpus {
    Language::new(spec, seed).corpus(sentences, seed + 1)
}

pub fn vocab(c: &Corpus, size: usize) -> Vocabulary {
    let spec = VocabSpec {
        target_size: size,
        tolerance: 0.05,
        ..VocabSpec::default()
    };
    learn_wordpiece(std::slice::from_ref(c), &spec)
        .expect("non-empty corpus")
        .vocab
}

/// Drops every `k`-th word of each sentence.
pub fn degrade(c: &Corpus, k: usize) -> Vec<String> {
    c.iter()
        .map(|s| {
            s.split(' ')
                .enumerate()
                .filter(|(i, _)| (i + 1) % k != 0)
                .map(|(_, w)| w)
                .collect::<Vec<_>>()
                .join(" ")
        })
        .collect()
}
