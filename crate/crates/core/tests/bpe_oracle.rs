//! The incremental BPE learner against a naive learner that recounts every
//! pair from scratch after each merge.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use proptest::prelude::*;
use xfervocab::bpe::{apply_bpe, enumerate_substrings, learn_bpe_from_counts, MergeRule, MergeTable, END_OF_WORD};

fn sort_key(s: &str) -> String {
    match s.strip_suffix(END_OF_WORD) {
        Some(stem) => format!("{stem}{}", char::MAX),
        None => s.to_string(),
    }
}

fn naive_learn(counts: &BTreeMap<String, u64>, num_merges: usize) -> Vec<(String, String)> {
    let mut words: Vec<(Vec<String>, u64)> = counts
        .iter()
        .map(|(w, &f)| {
            let mut syms: Vec<String> = w.chars().map(String::from).collect();
            syms.push(END_OF_WORD.to_string());
            (syms, f)
        })
        .collect();
    let mut rules = Vec::new();
    let mut emitted = BTreeSet::new();
    while rules.len() < num_merges {
        let mut pairs: HashMap<(String, String), u64> = HashMap::new();
        let mut symbols: HashMap<String, u64> = HashMap::new();
        for (syms, f) in &words {
            for s in syms {
                *symbols.entry(s.clone()).or_insert(0) += f;
            }
            for w in syms.windows(2) {
                *pairs.entry((w[0].clone(), w[1].clone())).or_insert(0) += f;
            }
        }
        let best = pairs.iter().filter(|(_, &c)| c > 0).max_by(|(a, ca), (b, cb)| {
            ca.cmp(cb)
                .then(symbols[&a.0].cmp(&symbols[&b.0]))
                .then_with(|| (sort_key(&b.0), sort_key(&b.1)).cmp(&(sort_key(&a.0), sort_key(&a.1))))
        });
        let Some(((l, r), _)) = best else { break };
        let (l, r) = (l.clone(), r.clone());
        for (syms, _) in &mut words {
            let mut out = Vec::new();
            let mut i = 0;
            while i < syms.len() {
                if i + 1 < syms.len() && syms[i] == l && syms[i + 1] == r {
                    out.push(format!("{l}{r}"));
                    i += 2;
                } else {
                    out.push(syms[i].clone());
                    i += 1;
                }
            }
            *syms = out;
        }
        if emitted.insert((l.clone(), r.clone())) {
            rules.push((l, r));
        }
    }
    rules
}

fn as_pairs(t: &MergeTable) -> Vec<(String, String)> {
    t.rules().iter().map(|r| (r.left.clone(), r.right.clone())).collect()
}

fn figure_table() -> MergeTable {
    let rules = [("r", "</w>"), ("o", "l"), ("e", "r</w>"), ("d", "er</w>"), ("w", "i")]
        .iter()
        .map(|(l, r)| MergeRule::new(*l, *r).unwrap())
        .collect();
    MergeTable::from_rules(rules).unwrap()
}

#[test]
fn figure_table_application() {
    let t = figure_table();
    assert_eq!(apply_bpe(&t, "older"), ["ol@@", "der"]);
    assert_eq!(apply_bpe(&t, "old"), ["ol@@", "d"]);
}

#[test]
fn toy_corpus_matches_naive_learner() {
    let counts: BTreeMap<String, u64> = ["old", "older", "wider"].iter().map(|w| (w.to_string(), 1)).collect();
    for merges in 1..=12 {
        let t = learn_bpe_from_counts(&counts, merges).unwrap();
        assert_eq!(as_pairs(&t), naive_learn(&counts, merges), "{merges} merges");
    }
}

#[test]
fn learned_toy_table_reproduces_words() {
    let counts: BTreeMap<String, u64> = ["old", "older", "wider"].iter().map(|w| (w.to_string(), 1)).collect();
    let t = learn_bpe_from_counts(&counts, 5).unwrap();
    for w in ["old", "older", "wider"] {
        let toks = apply_bpe(&t, w);
        assert_eq!(toks.concat().replace("@@", ""), w);
        assert!(toks.iter().all(|t| !t.contains(END_OF_WORD)));
    }
}

#[test]
fn substring_counts_for_distinct_characters() {
    // `^w$` has n + 2 characters, so (n+2)(n+1)/2 substrings of length >= 2
    let letters = "abcdef";
    for n in 1..=6 {
        let word = &letters[..n];
        let decorated: Vec<char> = format!("^{word}$").chars().collect();
        let mut brute = BTreeSet::new();
        for i in 0..decorated.len() {
            for j in i + 2..=decorated.len() {
                brute.insert(decorated[i..j].iter().collect::<String>());
            }
        }
        let got = enumerate_substrings(word);
        assert_eq!(got, brute);
        assert_eq!(got.len(), (n + 2) * (n + 1) / 2);
    }
    let a: BTreeSet<String> = ["^a", "a$", "^a$"].iter().map(|s| s.to_string()).collect();
    assert_eq!(enumerate_substrings("a"), a);
}

fn word_counts() -> impl Strategy<Value = BTreeMap<String, u64>> {
    prop::collection::btree_map("[abcd]{1,6}", 1u64..5, 1..12)
}

proptest! {
    #[test]
    fn incremental_learner_matches_naive(counts in word_counts(), merges in 1usize..20) {
        let t = learn_bpe_from_counts(&counts, merges).unwrap();
        prop_assert_eq!(as_pairs(&t), naive_learn(&counts, merges));
    }

    #[test]
    fn application_is_lossless(counts in word_counts(), merges in 1usize..20, word in "[abcde]{1,8}") {
        let t = learn_bpe_from_counts(&counts, merges).unwrap();
        let toks = apply_bpe(&t, &word);
        prop_assert_eq!(toks.concat().replace("@@", ""), word);
        for w in counts.keys() {
            prop_assert!(apply_bpe(&t, w).iter().all(|t| !t.contains(END_OF_WORD)));
        }
    }

    #[test]
    fn rule_count_bounded(counts in word_counts(), merges in 1usize..40) {
        let t = learn_bpe_from_counts(&counts, merges).unwrap();
        prop_assert!(t.len() <= merges);
    }

    #[test]
    fn substrings_contain_word_and_bigrams(word in "[a-zé]{1,8}") {
        let s = enumerate_substrings(&word);
        let decorated: Vec<char> = format!("^{word}$").chars().collect();
        prop_assert!(s.contains(&decorated.iter().collect::<String>()));
        for w in decorated.windows(2) {
            prop_assert!(s.contains(&w.iter().collect::<String>()));
        }
    }
}
