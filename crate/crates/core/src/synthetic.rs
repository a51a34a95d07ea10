//! Deterministic synthetic corpora for tests and benchmarks.
//!
//! A pseudo-language is a lexicon of words assembled from random syllables
//! over a fixed script. Sentences draw words from the lexicon with Zipfian
//! frequencies, so the corpora have a realistic long tail of rare words.

use rand::Rng;

use crate::corpus::{Corpus, Sentence};
use crate::rng::{self, SeededRng};

#[derive(Clone, Debug, PartialEq)]
pub struct LanguageSpec {
    pub name: String,
    pub consonants: Vec<char>,
    pub vowels: Vec<char>,
    pub lexicon_size: usize,
    pub min_syllables: usize,
    pub max_syllables: usize,
    pub zipf_exponent: f64,
    pub min_words: usize,
    pub max_words: usize,
}

impl LanguageSpec {
    fn new(name: &str, consonants: &str, vowels: &str) -> Self {
        LanguageSpec {
            name: name.to_string(),
            consonants: consonants.chars().collect(),
            vowels: vowels.chars().collect(),
            lexicon_size: 5000,
            min_syllables: 1,
            max_syllables: 4,
            zipf_exponent: 1.05,
            min_words: 4,
            max_words: 18,
        }
    }

    pub fn latin() -> Self {
        LanguageSpec::new("lat", "bcdfghjklmnprstvz", "aeiou")
    }

    pub fn latin_diacritics() -> Self {
        LanguageSpec::new("dia", "bcčdďfghjklmnňprřsštťvzž", "aáeéěiíoóuůúyý")
    }

    pub fn cyrillic() -> Self {
        LanguageSpec::new("cyr", "бвгджзклмнпрстфхцчшщ", "аеиоуыэюя")
    }

    pub fn greek() -> Self {
        LanguageSpec::new("gre", "βγδζθκλμνξπρστφχψ", "αεηιουω")
    }
}

/// A pseudo-language with a fixed lexicon.
#[derive(Clone, Debug)]
pub struct Language {
    pub spec: LanguageSpec,
    lexicon: Vec<String>,
    cdf: Vec<f64>,
}

fn syllable(spec: &LanguageSpec, rng: &mut SeededRng) -> String {
    let mut s = String::new();
    if rng.gen_bool(0.8) {
        s.push(spec.consonants[rng.gen_range(0..spec.consonants.len())]);
    }
    s.push(spec.vowels[rng.gen_range(0..spec.vowels.len())]);
    if rng.gen_bool(0.3) {
        s.push(spec.consonants[rng.gen_range(0..spec.consonants.len())]);
    }
    s
}

impl Language {
    /// Builds the lexicon. Words are distinct; the first words are the most
    /// frequent and tend to be short.
    pub fn new(spec: LanguageSpec, seed: u64) -> Self {
        let mut rng = rng::stream(seed, 0);
        let mut lexicon: Vec<String> = Vec::with_capacity(spec.lexicon_size);
        let mut seen = std::collections::HashSet::new();
        while lexicon.len() < spec.lexicon_size {
            let grow = lexicon.len() * 4 / spec.lexicon_size.max(1);
            let max = (spec.min_syllables + grow).min(spec.max_syllables);
            let n = rng.gen_range(spec.min_syllables..=max);
            let w: String = (0..n).map(|_| syllable(&spec, &mut rng)).collect();
            if seen.insert(w.clone()) {
                lexicon.push(w);
            }
        }
        let weights: Vec<f64> = (1..=lexicon.len())
            .map(|r| 1.0 / (r as f64).powf(spec.zipf_exponent))
            .collect();
        let total: f64 = weights.iter().sum();
        let mut acc = 0.0;
        let cdf = weights
            .iter()
            .map(|w| {
                acc += w / total;
                acc
            })
            .collect();
        Language { spec, lexicon, cdf }
    }

    pub fn lexicon(&self) -> &[String] {
        &self.lexicon
    }

    fn word<'a>(&'a self, rng: &mut SeededRng) -> &'a str {
        let u: f64 = rng.gen();
        let i = self.cdf.partition_point(|&c| c < u).min(self.lexicon.len() - 1);
        &self.lexicon[i]
    }

    pub fn sentence(&self, rng: &mut SeededRng) -> String {
        let n = rng.gen_range(self.spec.min_words..=self.spec.max_words);
        let mut s = String::new();
        for i in 0..n {
            if i > 0 {
                s.push(' ');
            }
            let w = self.word(rng);
            if i == 0 {
                let mut cs = w.chars();
                if let Some(c) = cs.next() {
                    s.extend(c.to_uppercase());
                    s.push_str(cs.as_str());
                }
            } else {
                s.push_str(w);
            }
            if i + 1 < n && rng.gen_bool(0.06) {
                s.push(',');
            }
        }
        s.push(if rng.gen_bool(0.1) { '?' } else { '.' });
        s
    }

    /// `n` sentences; sentence content depends only on `(seed, n)`.
    pub fn corpus(&self, n: usize, seed: u64) -> Corpus {
        let mut rng = rng::stream(seed, 1);
        let sentences = (0..n)
            .map(|_| Sentence::new(self.sentence(&mut rng)).expect("generated sentences have no line feeds"))
            .collect();
        Corpus::new(sentences).with_lang(self.spec.name.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic() {
        let a = Language::new(LanguageSpec::cyrillic(), 3).corpus(50, 9);
        let b = Language::new(LanguageSpec::cyrillic(), 3).corpus(50, 9);
        assert_eq!(a, b);
        assert_eq!(a.len(), 50);
        assert_eq!(a.lang.as_deref(), Some("cyr"));
    }

    #[test]
    fn lexicon_is_distinct_and_zipfian() {
        let l = Language::new(
            LanguageSpec {
                lexicon_size: 300,
                ..LanguageSpec::latin()
            },
            1,
        );
        let set: std::collections::HashSet<_> = l.lexicon().iter().collect();
        assert_eq!(set.len(), 300);
        let c = l.corpus(2000, 2);
        let top = &l.lexicon()[0];
        let last = &l.lexicon()[299];
        let count = |w: &str| {
            c.iter()
                .flat_map(|s| s.split_whitespace())
                .filter(|t| t.trim_end_matches([',', '.', '?']) == w)
                .count()
        };
        assert!(count(top) > 5 * count(last).max(1));
    }
}
