//! Wordpiece vocabulary learning.
//!
//! Candidate units are counted from unit-type frequencies. For a fixed
//! minimum count the vocabulary is refined over a few iterations: segment
//! every unit greedily with the current vocabulary; from each piece start,
//! count every substring that runs to the end of the segment; accept
//! candidates longest first whose count reaches the threshold, subtracting
//! an accepted candidate's count from its proper prefixes; finally add the
//! whole alphabet and order by count.
//!
//! The threshold is bisected until the vocabulary size lands within the
//! tolerance of the target. If no threshold does, the smallest vocabulary
//! above the target is truncated to the target by dropping its
//! lowest-count multi-character tokens.
//!
//! Candidates never contain `_` or `\` except as the trailing word-end
//! marker, and never mix whitespace with other characters.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::sync::{Arc, Mutex};

use super::segment::split_units;
use super::vocab::{Vocabulary, ESCAPE_START, RESERVED_TOKENS, WORD_END};
use crate::corpus::Corpus;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct VocabSpec {
    pub target_size: usize,
    /// Allowed relative deviation from `target_size`.
    pub tolerance: f64,
    /// Only the first this-many sentences of the concatenated corpora are counted.
    pub max_train_sentences: usize,
    /// Refinement passes per threshold.
    pub num_iterations: usize,
}

impl Default for VocabSpec {
    fn default() -> Self {
        VocabSpec {
            target_size: 32_000,
            tolerance: 0.01,
            max_train_sentences: 20_000_000,
            num_iterations: 4,
        }
    }
}

impl VocabSpec {
    pub fn with_target(target_size: usize) -> Self {
        VocabSpec {
            target_size,
            ..VocabSpec::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tolerance > 0.0 && self.tolerance < 0.5) {
            return Err(Error::InvalidArgument(format!(
                "tolerance {} must lie in (0, 0.5)",
                self.tolerance
            )));
        }
        if self.target_size == 0 {
            return Err(Error::InvalidArgument("target size must be positive".into()));
        }
        if self.num_iterations == 0 {
            return Err(Error::InvalidArgument("num_iterations must be >= 1".into()));
        }
        Ok(())
    }

    /// Inclusive size bounds accepted by the tolerance.
    pub fn bounds(&self) -> (usize, usize) {
        size_bounds(self.target_size, self.tolerance)
    }
}

fn size_bounds(target: usize, tolerance: f64) -> (usize, usize) {
    let slack = tolerance * target as f64;
    let lo = (target as f64 - slack).ceil().max(0.0) as usize;
    let hi = (target as f64 + slack).floor() as usize;
    (lo, hi)
}

#[derive(Clone, Debug)]
pub struct WordpieceBuild {
    pub vocab: Vocabulary,
    /// Threshold of the build the vocabulary came from.
    pub min_count: u64,
    pub within_tolerance: bool,
    /// Number of distinct thresholds built.
    pub builds_tried: usize,
    /// Whether the result was truncated to the target size.
    pub trimmed: bool,
}

/// Counts from a fixed training sample, with a cache of built vocabularies
/// per threshold so repeated size searches are cheap.
pub struct WordpieceTrainer {
    segments: Vec<(String, u64)>,
    alphabet: BTreeSet<char>,
    max_count: u64,
    num_iterations: usize,
    cache: Mutex<HashMap<u64, Arc<Vec<String>>>>,
}

/// Splits a unit into the runs candidates may span, appending the
/// word-end marker to the last run when the unit ends in a matchable
/// character.
fn unit_segments(unit: &str, mut emit: impl FnMut(String)) {
    let mut cur = String::new();
    let mut cur_ws: Option<bool> = None;
    for c in unit.chars() {
        if c == WORD_END || c == ESCAPE_START {
            if !cur.is_empty() {
                emit(std::mem::take(&mut cur));
            }
            cur_ws = None;
            continue;
        }
        let ws = c.is_whitespace();
        if cur_ws.is_some_and(|w| w != ws) {
            emit(std::mem::take(&mut cur));
        }
        cur_ws = Some(ws);
        cur.push(c);
    }
    if !cur.is_empty() {
        cur.push(WORD_END);
        emit(cur);
    }
}

impl WordpieceTrainer {
    pub fn new(corpora: &[Corpus], max_train_sentences: usize, num_iterations: usize) -> Result<Self> {
        let mut counts: HashMap<String, u64> = HashMap::new();
        let sentences = corpora.iter().flat_map(|c| c.iter()).take(max_train_sentences);
        for s in sentences {
            for unit in split_units(s) {
                unit_segments(unit, |seg| *counts.entry(seg).or_insert(0) += 1);
            }
        }
        if counts.is_empty() {
            return Err(Error::EmptyCorpus);
        }
        let mut segments: Vec<(String, u64)> = counts.into_iter().collect();
        segments.sort_unstable();
        let mut alphabet: BTreeSet<char> = segments.iter().flat_map(|(s, _)| s.chars()).collect();
        alphabet.extend(RESERVED_TOKENS.iter().flat_map(|t| t.chars()));
        // A substring's count never exceeds the count of its first character.
        let mut char_counts: HashMap<char, u64> = HashMap::new();
        for (seg, c) in &segments {
            for ch in seg.chars() {
                *char_counts.entry(ch).or_insert(0) += c;
            }
        }
        let max_count = char_counts.values().copied().max().unwrap_or(1);
        Ok(WordpieceTrainer {
            segments,
            alphabet,
            max_count,
            num_iterations: num_iterations.max(1),
            cache: Mutex::new(HashMap::new()),
        })
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet.len()
    }

    /// Ordered tokens of the vocabulary built with threshold `min_count`.
    pub fn tokens_at(&self, min_count: u64) -> Arc<Vec<String>> {
        if let Some(t) = self.cache.lock().expect("cache lock").get(&min_count) {
            return Arc::clone(t);
        }
        let tokens = Arc::new(self.build_tokens(min_count.max(1)));
        self.cache
            .lock()
            .expect("cache lock")
            .insert(min_count, Arc::clone(&tokens));
        tokens
    }

    pub fn build(&self, min_count: u64) -> Vocabulary {
        Vocabulary::new(self.tokens_at(min_count).as_ref().clone()).expect("learned tokens are unique")
    }

    fn build_tokens(&self, min_count: u64) -> Vec<String> {
        let min_count = min_count as i64;
        let alphabet: Vec<String> = self.alphabet.iter().map(|c| c.to_string()).collect();
        let mut vocab: HashSet<String> = alphabet.iter().cloned().collect();
        let mut max_len = 1;
        let mut ordered = Vec::new();
        let mut bounds = Vec::new();

        for _ in 0..self.num_iterations {
            let mut counts: HashMap<&str, i64> = HashMap::new();
            for (seg, c) in &self.segments {
                let c = *c as i64;
                bounds.clear();
                bounds.extend(seg.char_indices().map(|(b, _)| b));
                bounds.push(seg.len());
                let m = bounds.len() - 1;
                let mut start = 0;
                while start < m {
                    let mut len = max_len.min(m - start);
                    while len > 1 && !vocab.contains(&seg[bounds[start]..bounds[start + len]]) {
                        len -= 1;
                    }
                    for end in start + 1..=m {
                        *counts.entry(&seg[bounds[start]..bounds[end]]).or_insert(0) += c;
                    }
                    start += len;
                }
            }

            let mut by_len: BTreeMap<usize, Vec<&str>> = BTreeMap::new();
            for (&s, &cnt) in &counts {
                if cnt >= min_count {
                    by_len.entry(s.chars().count()).or_default().push(s);
                }
            }
            let mut accepted: Vec<(i64, String)> = Vec::new();
            for (&len, strings) in by_len.iter().rev() {
                for &s in strings {
                    let cnt = counts[s];
                    if cnt < min_count {
                        continue;
                    }
                    if len > 1 {
                        accepted.push((cnt, s.to_string()));
                    }
                    for (b, _) in s.char_indices().skip(1) {
                        if let Some(p) = counts.get_mut(&s[..b]) {
                            *p -= cnt;
                        }
                    }
                }
            }
            for a in &alphabet {
                accepted.push((counts.get(a.as_str()).copied().unwrap_or(0), a.clone()));
            }
            accepted.sort_unstable_by(|x, y| y.0.cmp(&x.0).then_with(|| x.1.cmp(&y.1)));

            ordered = accepted.into_iter().map(|(_, s)| s).collect::<Vec<_>>();
            max_len = ordered.iter().map(|s| s.chars().count()).max().unwrap_or(1);
            vocab = ordered.iter().cloned().collect();
        }
        ordered
    }

    /// Searches for a threshold whose vocabulary size is within `tolerance`
    /// of `target`; see the module docs for the fallback.
    pub fn learn(&self, target: usize, tolerance: f64) -> WordpieceBuild {
        let (lo_ok, hi_ok) = size_bounds(target, tolerance);
        let within = |size: usize| size >= lo_ok && size <= hi_ok;
        let mut sizes: BTreeMap<u64, usize> = BTreeMap::new();
        let chosen = self.bisect(1, self.max_count, target, &within, &mut sizes);
        let builds_tried = sizes.len();
        let size = sizes[&chosen];
        if within(size) {
            return WordpieceBuild {
                vocab: self.build(chosen),
                min_count: chosen,
                within_tolerance: true,
                builds_tried,
                trimmed: false,
            };
        }
        let above = sizes
            .iter()
            .filter(|(_, &s)| s > target)
            .min_by_key(|(&t, &s)| (s, std::cmp::Reverse(t)))
            .map(|(&t, _)| t);
        if let Some(threshold) = above {
            let vocab = self.build(threshold).truncate(target);
            if within(vocab.len()) {
                return WordpieceBuild {
                    vocab,
                    min_count: threshold,
                    within_tolerance: true,
                    builds_tried,
                    trimmed: true,
                };
            }
        }
        log::warn!("no vocabulary within tolerance of {target}; closest has {size} tokens");
        WordpieceBuild {
            vocab: self.build(chosen),
            min_count: chosen,
            within_tolerance: false,
            builds_tried,
            trimmed: false,
        }
    }

    fn size_at(&self, min_count: u64, sizes: &mut BTreeMap<u64, usize>) -> usize {
        *sizes
            .entry(min_count)
            .or_insert_with(|| self.tokens_at(min_count).len())
    }

    fn bisect(
        &self,
        lo: u64,
        hi: u64,
        target: usize,
        within: &dyn Fn(usize) -> bool,
        sizes: &mut BTreeMap<u64, usize>,
    ) -> u64 {
        let mid = (lo + hi) / 2;
        let size = self.size_at(mid, sizes);
        if within(size) || lo >= hi {
            return mid;
        }
        let other = if size > target {
            if mid + 1 > hi {
                return mid;
            }
            self.bisect(mid + 1, hi, target, within, sizes)
        } else {
            if mid - 1 < lo {
                return mid;
            }
            self.bisect(lo, mid - 1, target, within, sizes)
        };
        let other_size = sizes[&other];
        if other_size.abs_diff(target) < size.abs_diff(target) {
            other
        } else {
            mid
        }
    }
}

/// Learns a wordpiece vocabulary of roughly `spec.target_size` tokens from
/// the concatenation of `corpora`. Deterministic.
pub fn learn_wordpiece(corpora: &[Corpus], spec: &VocabSpec) -> Result<WordpieceBuild> {
    spec.validate()?;
    let trainer = WordpieceTrainer::new(corpora, spec.max_train_sentences, spec.num_iterations)?;
    Ok(trainer.learn(spec.target_size, spec.tolerance))
}
