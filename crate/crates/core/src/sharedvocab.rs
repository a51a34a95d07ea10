//! Warm-start vocabularies shared by parent and child.
//!
//! A merged vocabulary is the parent vocabulary followed by the child
//! tokens it lacks, so parent indices stay valid. A balanced vocabulary is
//! learned from an equal number of sentences drawn from every input file.

use std::collections::HashSet;

use crate::corpus::{sample_equal_many, Corpus, Sentence};
use crate::wordpiece::{learn_wordpiece, VocabSpec, Vocabulary, WordpieceBuild, WordpieceTrainer};
use crate::{Error, Result};

/// Parent tokens in order, then child tokens not in the parent.
pub fn merge_vocabs(parent: &Vocabulary, child: &Vocabulary) -> Vocabulary {
    let mut tokens = parent.tokens().to_vec();
    let seen: HashSet<&str> = parent.iter().collect();
    tokens.extend(child.iter().filter(|t| !seen.contains(t)).map(str::to_string));
    Vocabulary::new(tokens).expect("ordered union of valid vocabularies")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MergedBuildReport {
    pub target_size: usize,
    /// Per-side size of the first attempt.
    pub initial_size_tried: usize,
    /// Per-side size of the returned vocabulary.
    pub side_size: usize,
    pub final_size: usize,
    pub iterations: usize,
    pub within_tolerance: bool,
}

impl MergedBuildReport {
    pub const TSV_HEADER: &'static str =
        "target_size\tinitial_size_tried\tside_size\tfinal_size\titerations\twithin_tolerance";

    pub fn to_tsv(&self) -> String {
        format!(
            "{}\n{}\t{}\t{}\t{}\t{}\t{}\n",
            Self::TSV_HEADER,
            self.target_size,
            self.initial_size_tried,
            self.side_size,
            self.final_size,
            self.iterations,
            self.within_tolerance
        )
    }
}

/// Learns one vocabulary per corpus at a common per-side size `s` and
/// merges them, searching `s` by bisection until the merged size is within
/// `spec.tolerance` of `spec.target_size`. The first attempt uses
/// `s = target`; if no size fits, the closest merge is returned.
pub fn build_merged_vocab(
    parent_corpus: &Corpus,
    child_corpus: &Corpus,
    spec: &VocabSpec,
) -> Result<(Vocabulary, MergedBuildReport)> {
    spec.validate()?;
    let target = spec.target_size;
    let (lo_ok, hi_ok) = spec.bounds();
    let parent = WordpieceTrainer::new(
        std::slice::from_ref(parent_corpus),
        spec.max_train_sentences,
        spec.num_iterations,
    )?;
    let child = WordpieceTrainer::new(
        std::slice::from_ref(child_corpus),
        spec.max_train_sentences,
        spec.num_iterations,
    )?;

    let merged_at = |s: usize| {
        let p = parent.learn(s, 0.0).vocab;
        let c = child.learn(s, 0.0).vocab;
        merge_vocabs(&p, &c)
    };

    let mut lo = parent.alphabet_size().max(child.alphabet_size());
    let mut hi = target.max(lo);
    let mut s = hi;
    let mut iterations = 0;
    let mut best: Option<(usize, usize, Vocabulary)> = None;
    loop {
        iterations += 1;
        let merged = merged_at(s);
        let size = merged.len();
        log::debug!("merged vocabulary: side size {s} gives {size}");
        let closer = best
            .as_ref()
            .is_none_or(|(_, b, _)| size.abs_diff(target) < b.abs_diff(target));
        if closer {
            best = Some((s, size, merged));
        }
        if (lo_ok..=hi_ok).contains(&size) {
            break;
        }
        if size > target {
            hi = s.saturating_sub(1);
        } else {
            lo = s + 1;
        }
        if lo > hi {
            break;
        }
        s = lo + (hi - lo) / 2;
    }
    let (side_size, final_size, vocab) = best.expect("at least one iteration");
    let report = MergedBuildReport {
        target_size: target,
        initial_size_tried: target.max(parent.alphabet_size().max(child.alphabet_size())),
        side_size,
        final_size,
        iterations,
        within_tolerance: (lo_ok..=hi_ok).contains(&final_size),
    };
    Ok((vocab, report))
}

#[derive(Clone, Debug)]
pub struct BalancedBuild {
    pub build: WordpieceBuild,
    /// Sentences drawn from each input file.
    pub per_side: usize,
}

/// Learns a vocabulary from `min |file|` sentences sampled from each file.
/// Every file weighs the same regardless of its language.
pub fn build_balanced_vocab(files: &[Corpus], spec: &VocabSpec, seed: u64) -> Result<BalancedBuild> {
    spec.validate()?;
    if files.is_empty() || files.iter().any(Corpus::is_empty) {
        return Err(Error::EmptyCorpus);
    }
    let per_side = files.iter().map(Corpus::len).min().expect("non-empty");
    let sources: Vec<&[Sentence]> = files.iter().map(|c| c.sentences.as_slice()).collect();
    let mixed = Corpus::new(sample_equal_many(&sources, per_side, seed)?);
    let build = learn_wordpiece(&[mixed], spec)?;
    Ok(BalancedBuild { build, per_side })
}
