//! Vocabulary and segmentation analyses.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::corpus::{filter_by_subword_length, Corpus, FilterReport, ParallelCorpus};
use crate::wordpiece::Vocabulary;
use crate::{tsv, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SegmentationRate {
    pub tokens: usize,
    pub words: usize,
}

impl SegmentationRate {
    pub fn rate(&self) -> f64 {
        self.tokens as f64 / self.words as f64
    }

    pub const TSV_HEADER: &'static str = "tokens\twords\trate";

    pub fn to_tsv(&self) -> String {
        format!(
            "{}\n{}\t{}\t{:.6}\n",
            Self::TSV_HEADER,
            self.tokens,
            self.words,
            self.rate()
        )
    }
}

/// Wordpiece tokens per whitespace-separated word.
pub fn segmentation_rate(v: &Vocabulary, c: &Corpus) -> Result<SegmentationRate> {
    let (tokens, words) = c
        .sentences
        .par_iter()
        .map(|s| (v.token_count(s.as_str()), s.word_count()))
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    if words == 0 {
        return Err(Error::EmptyCorpus);
    }
    Ok(SegmentationRate { tokens, words })
}

/// Inclusive character ranges. A token matches if any of its characters
/// falls in a range.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharClass {
    ranges: Vec<(char, char)>,
}

impl CharClass {
    pub fn new(ranges: Vec<(char, char)>) -> Result<Self> {
        if let Some((a, b)) = ranges.iter().find(|(a, b)| a > b) {
            return Err(Error::InvalidArgument(format!(
                "empty range U+{:04X}-U+{:04X}",
                *a as u32, *b as u32
            )));
        }
        Ok(CharClass { ranges })
    }

    pub fn cyrillic() -> Self {
        CharClass {
            ranges: vec![('\u{0400}', '\u{052F}')],
        }
    }

    pub fn contains(&self, c: char) -> bool {
        self.ranges.iter().any(|&(a, b)| a <= c && c <= b)
    }

    pub fn matches(&self, token: &str) -> bool {
        token.chars().any(|c| self.contains(c))
    }
}

/// Comma-separated hexadecimal code points or ranges, e.g. `0400-04FF,0500-052F`.
/// The name `cyrillic` is accepted as a shorthand.
impl FromStr for CharClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.trim() == "cyrillic" {
            return Ok(CharClass::cyrillic());
        }
        let bad = || Error::InvalidArgument(format!("invalid character class `{s}`"));
        let cp = |h: &str| {
            u32::from_str_radix(h.trim().trim_start_matches("U+").trim_start_matches("u+"), 16)
                .ok()
                .and_then(char::from_u32)
                .ok_or_else(bad)
        };
        let ranges = s
            .split(',')
            .map(|part| match part.split_once('-') {
                Some((a, b)) => Ok((cp(a)?, cp(b)?)),
                None => cp(part).map(|c| (c, c)),
            })
            .collect::<Result<Vec<_>>>()?;
        CharClass::new(ranges)
    }
}

impl fmt::Display for CharClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (a, b)) in self.ranges.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{:04X}-{:04X}", *a as u32, *b as u32)?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VocabUsage {
    pub used: usize,
    pub total: usize,
}

impl VocabUsage {
    /// Zero when no token is eligible.
    pub fn ratio(&self) -> f64 {
        if self.total == 0 {
            0.0
        } else {
            self.used as f64 / self.total as f64
        }
    }

    pub const TSV_HEADER: &'static str = "used\ttotal\tratio";

    pub fn to_tsv(&self) -> String {
        format!(
            "{}\n{}\t{}\t{:.6}\n",
            Self::TSV_HEADER,
            self.used,
            self.total,
            self.ratio()
        )
    }
}

/// Occurrences of each vocabulary id in the segmented corpus.
pub fn token_counts(v: &Vocabulary, c: &Corpus) -> Vec<u64> {
    c.sentences
        .par_iter()
        .fold(
            || vec![0u64; v.len()],
            |mut acc, s| {
                for p in v.pieces(s.as_str()) {
                    if let Some(id) = p.id {
                        acc[id as usize] += 1;
                    }
                }
                acc
            },
        )
        .reduce(
            || vec![0u64; v.len()],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        )
}

/// Fraction of vocabulary tokens, optionally only those matching
/// `filter`, that occur at least once in the segmented corpus.
pub fn vocab_usage(v: &Vocabulary, c: &Corpus, filter: Option<&CharClass>) -> VocabUsage {
    let counts = token_counts(v, c);
    let eligible = |t: &str| filter.is_none_or(|f| f.matches(t));
    let mut usage = VocabUsage { used: 0, total: 0 };
    for (t, n) in v.iter().zip(counts) {
        if eligible(t) {
            usage.total += 1;
            usage.used += usize::from(n > 0);
        }
    }
    usage
}

/// Which side of the transfer a language appears on. English in a
/// Russian-English parent and Estonian-English child is on both.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Roles {
    pub parent: bool,
    pub child: bool,
}

#[derive(Clone, Debug)]
pub struct LabeledCorpus {
    pub label: String,
    pub roles: Roles,
    pub corpus: Corpus,
}

pub type LanguageSet = BTreeSet<String>;

#[derive(Clone, Debug, PartialEq)]
pub struct OverlapBreakdown {
    /// Tokens per exact set of languages they were observed in.
    pub classes: BTreeMap<LanguageSet, usize>,
    pub never_observed: usize,
    /// Tokens in classes that touch both a parent-side and a child-side
    /// language, i.e. parent subwords the child also uses.
    pub reused_parent: usize,
    /// Tokens observed only in languages the child does not use.
    pub unused_by_child: usize,
    pub min_count: u64,
    pub vocab_size: usize,
    pub labels: Vec<String>,
}

impl OverlapBreakdown {
    /// Tokens in all classes accepted by `select`.
    pub fn count_where(&self, mut select: impl FnMut(&LanguageSet) -> bool) -> usize {
        self.classes.iter().filter(|(k, _)| select(k)).map(|(_, n)| n).sum()
    }

    pub fn percent(&self, n: usize) -> f64 {
        if self.vocab_size == 0 {
            0.0
        } else {
            100.0 * n as f64 / self.vocab_size as f64
        }
    }

    /// One column per language (`1` if in the class), then count and
    /// percentage. The two summary rows put their name in the first column.
    pub fn to_tsv(&self) -> String {
        let mut header: Vec<&str> = self.labels.iter().map(String::as_str).collect();
        header.extend(["tokens", "percent"]);
        let mut s = tsv::row(header);
        s.push('\n');
        for (set, &n) in &self.classes {
            let mut cells: Vec<String> = self
                .labels
                .iter()
                .map(|l| if set.contains(l) { "1" } else { "0" }.to_string())
                .collect();
            cells.push(n.to_string());
            cells.push(format!("{:.2}", self.percent(n)));
            s.push_str(&tsv::row(cells));
            s.push('\n');
        }
        for (name, n) in [
            ("never_observed", self.never_observed),
            ("reused_parent", self.reused_parent),
            ("unused_by_child", self.unused_by_child),
        ] {
            let mut cells = vec![name.to_string()];
            cells.extend(std::iter::repeat_n(String::new(), self.labels.len().saturating_sub(1)));
            cells.push(n.to_string());
            cells.push(format!("{:.2}", self.percent(n)));
            s.push_str(&tsv::row(cells));
            s.push('\n');
        }
        s
    }
}

/// Segments each corpus and assigns every token to the set of languages in
/// which it occurs at least `min_count` times.
pub fn overlap_breakdown(v: &Vocabulary, corpora: &[LabeledCorpus], min_count: u64) -> Result<OverlapBreakdown> {
    if corpora.len() < 2 {
        return Err(Error::InvalidArgument(
            "overlap breakdown needs at least two corpora".into(),
        ));
    }
    let labels: Vec<String> = corpora.iter().map(|c| c.label.clone()).collect();
    if labels.iter().collect::<BTreeSet<_>>().len() != labels.len() {
        return Err(Error::InvalidArgument("corpus labels must be unique".into()));
    }
    let counts: Vec<Vec<u64>> = corpora.iter().map(|c| token_counts(v, &c.corpus)).collect();
    let mut classes: BTreeMap<LanguageSet, usize> = BTreeMap::new();
    let mut never_observed = 0;
    for id in 0..v.len() {
        let set: LanguageSet = corpora
            .iter()
            .zip(&counts)
            .filter(|(_, c)| c[id] >= min_count)
            .map(|(l, _)| l.label.clone())
            .collect();
        if set.is_empty() {
            never_observed += 1;
        } else {
            *classes.entry(set).or_insert(0) += 1;
        }
    }
    let role_of = |label: &str| {
        corpora
            .iter()
            .find(|c| c.label == label)
            .map(|c| c.roles)
            .unwrap_or_default()
    };
    let mut b = OverlapBreakdown {
        classes,
        never_observed,
        reused_parent: 0,
        unused_by_child: 0,
        min_count,
        vocab_size: v.len(),
        labels,
    };
    b.reused_parent =
        b.count_where(|set| set.iter().any(|l| role_of(l).parent) && set.iter().any(|l| role_of(l).child));
    b.unused_by_child = b.count_where(|set| !set.iter().any(|l| role_of(l).child));
    Ok(b)
}

/// Share of pairs a subword-length filter at `max_tokens` would remove.
pub fn length_filter_impact(v: &Vocabulary, c: &ParallelCorpus, max_tokens: usize) -> FilterReport {
    filter_by_subword_length(c, v, max_tokens).1
}

#[cfg(test)]
mod tests {
    use super::*;

    const SENTENCE: &str = "O víkendu budeme doma.";

    #[test]
    fn rates_of_the_toy_vocabularies() {
        let c = Corpus::from_lines([SENTENCE]).unwrap();
        let cs = Vocabulary::with_printable_ascii(["bude", "doma_", "end", "me_", "ví", "vík"]).unwrap();
        let en = Vocabulary::with_printable_ascii(["bud", "dom", "end", "ho", "me", "week_", "will"]).unwrap();
        let r = segmentation_rate(&cs, &c).unwrap();
        assert_eq!((r.tokens, r.words), (8, 4));
        assert_eq!(r.rate(), 2.0);
        assert_eq!(segmentation_rate(&en, &c).unwrap().rate(), 4.0);
    }

    #[test]
    fn whole_word_vocabulary_has_rate_one() {
        let c = Corpus::from_lines(["a bb", "bb ccc"]).unwrap();
        let v = Vocabulary::from_tokens(["a_", "bb_", "ccc_"]).unwrap();
        assert_eq!(segmentation_rate(&v, &c).unwrap().rate(), 1.0);
    }

    #[test]
    fn empty_corpus_rate_is_an_error() {
        let v = Vocabulary::from_tokens(["a"]).unwrap();
        assert!(segmentation_rate(&v, &Corpus::default()).is_err());
        assert!(segmentation_rate(&v, &Corpus::from_lines([""]).unwrap()).is_err());
    }

    #[test]
    fn usage() {
        let v = Vocabulary::from_tokens(["a_", "b_", "да_", "x"]).unwrap();
        let c = Corpus::from_lines(["a да"]).unwrap();
        let u = vocab_usage(&v, &c, None);
        assert_eq!((u.used, u.total), (2, 4));
        let u = vocab_usage(&v, &c, Some(&CharClass::cyrillic()));
        assert_eq!((u.used, u.total), (1, 1));
        assert_eq!(vocab_usage(&v, &Corpus::default(), None).ratio(), 0.0);
        let all = Corpus::from_lines(["a b да x_y"]).unwrap();
        assert_eq!(vocab_usage(&v, &all, None).ratio(), 1.0);
    }

    #[test]
    fn char_class_parsing() {
        let c: CharClass = "0400-04FF,0041".parse().unwrap();
        assert!(c.matches("bд") && c.matches("A") && !c.matches("b"));
        assert_eq!(c.to_string(), "0400-04FF,0041-0041");
        assert!("04FF-0400".parse::<CharClass>().is_err());
        assert!("zz".parse::<CharClass>().is_err());
    }

    fn labeled(label: &str, parent: bool, child: bool, lines: &[&str]) -> LabeledCorpus {
        LabeledCorpus {
            label: label.into(),
            roles: Roles { parent, child },
            corpus: Corpus::from_lines(lines.iter().copied()).unwrap(),
        }
    }

    #[test]
    fn threshold_semantics() {
        let v = Vocabulary::from_tokens(["t_"]).unwrap();
        let a = labeled("A", true, false, &[&"t ".repeat(12)]);
        let b = labeled("B", false, true, &[&"t ".repeat(3)]);
        let o = overlap_breakdown(&v, &[a, b], 10).unwrap();
        let only_a: LanguageSet = ["A".to_string()].into();
        assert_eq!(o.classes.get(&only_a), Some(&1));
        assert_eq!(o.unused_by_child, 1);
        assert_eq!(o.reused_parent, 0);
    }

    #[test]
    fn three_language_breakdown_matches_set_arithmetic() {
        // et = child only, en = both sides, ru = parent only
        let v = Vocabulary::from_tokens(["x_", "y_", "z_", "w_", "q_", "unseen"]).unwrap();
        let et = labeled("et", false, true, &["x y w"]);
        let en = labeled("en", true, true, &["y z"]);
        let ru = labeled("ru", true, false, &["z w q"]);
        let o = overlap_breakdown(&v, &[et, en, ru], 1).unwrap();
        let set = |ls: &[&str]| -> LanguageSet { ls.iter().map(|s| s.to_string()).collect() };
        assert_eq!(o.classes[&set(&["et"])], 1); // x
        assert_eq!(o.classes[&set(&["en", "et"])], 1); // y
        assert_eq!(o.classes[&set(&["en", "ru"])], 1); // z
        assert_eq!(o.classes[&set(&["et", "ru"])], 1); // w
        assert_eq!(o.classes[&set(&["ru"])], 1); // q
        assert_eq!(o.never_observed, 1);
        assert_eq!(o.reused_parent, 3);
        assert_eq!(o.unused_by_child, 1);
        assert_eq!(o.classes.values().sum::<usize>() + o.never_observed, v.len());
    }

    #[test]
    fn breakdown_needs_two_corpora() {
        let v = Vocabulary::from_tokens(["a"]).unwrap();
        assert!(overlap_breakdown(&v, &[labeled("a", true, false, &["a"])], 1).is_err());
    }

    #[test]
    fn filter_impact_quarter() {
        let v = Vocabulary::from_tokens(["a_"]).unwrap();
        let c = ParallelCorpus::from_pairs([("a", "a"), ("a a", "a"), ("a", "a a"), ("a a a", "a")]).unwrap();
        let r = length_filter_impact(&v, &c, 2);
        assert_eq!((r.kept, r.dropped), (3, 1));
        assert!(length_filter_impact(&v, &c, 3).dropped <= r.dropped);
    }
}
