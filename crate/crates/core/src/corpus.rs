//! Monolingual and parallel corpora.
//!
//! Corpora are plain UTF-8 text, one sentence per line. Loading applies no
//! tokenization or normalisation; a "word" anywhere in this module is a
//! maximal run of non-whitespace characters.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::fs;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;

use crate::rng::{self, SeededRng};
use crate::wordpiece::Vocabulary;
use crate::{Error, Result};

/// One line of text. Never contains a line break.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Sentence(String);

impl Sentence {
    pub fn new(text: impl Into<String>) -> Result<Self> {
        let text = text.into();
        if text.contains('\n') {
            return Err(Error::InvalidSentence("sentence contains a line feed".to_string()));
        }
        Ok(Sentence(text))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn into_string(self) -> String {
        self.0
    }

    pub fn words(&self) -> impl Iterator<Item = &str> {
        self.0.split_whitespace()
    }

    pub fn word_count(&self) -> usize {
        self.words().count()
    }
}

impl AsRef<str> for Sentence {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Sentence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A monolingual corpus.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Corpus {
    pub lang: Option<String>,
    pub sentences: Vec<Sentence>,
}

impl Corpus {
    pub fn new(sentences: Vec<Sentence>) -> Self {
        Corpus { lang: None, sentences }
    }

    /// Builds a corpus from string lines, rejecting embedded line feeds.
    pub fn from_lines<I, S>(lines: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let sentences = lines.into_iter().map(Sentence::new).collect::<Result<Vec<_>>>()?;
        Ok(Corpus::new(sentences))
    }

    pub fn with_lang(mut self, lang: impl Into<String>) -> Self {
        self.lang = Some(lang.into());
        self
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let sentences = read_lines(path)?;
        Ok(Corpus {
            lang: lang_from_path(path),
            sentences,
        })
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        write_lines(path.as_ref(), self.sentences.iter().map(Sentence::as_str))
    }

    pub fn len(&self) -> usize {
        self.sentences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sentences.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.sentences.iter().map(Sentence::as_str)
    }

    pub fn word_count(&self) -> usize {
        self.sentences.iter().map(Sentence::word_count).sum()
    }

    /// Concatenation of several corpora, in order.
    pub fn concat<'a>(corpora: impl IntoIterator<Item = &'a Corpus>) -> Corpus {
        let mut out = Corpus::default();
        for c in corpora {
            out.sentences.extend(c.sentences.iter().cloned());
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SentencePair {
    pub source: Sentence,
    pub target: Sentence,
}

impl SentencePair {
    pub fn new(source: impl Into<String>, target: impl Into<String>) -> Result<Self> {
        Ok(SentencePair {
            source: Sentence::new(source)?,
            target: Sentence::new(target)?,
        })
    }
}

/// Aligned source/target sentences. Pair order is the input order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ParallelCorpus {
    pub source_lang: String,
    pub target_lang: String,
    pub pairs: Vec<SentencePair>,
}

impl ParallelCorpus {
    pub fn new(source_lang: impl Into<String>, target_lang: impl Into<String>) -> Self {
        ParallelCorpus {
            source_lang: source_lang.into(),
            target_lang: target_lang.into(),
            pairs: Vec::new(),
        }
    }

    pub fn from_pairs<I, A, B>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (A, B)>,
        A: Into<String>,
        B: Into<String>,
    {
        let pairs = pairs
            .into_iter()
            .map(|(s, t)| SentencePair::new(s, t))
            .collect::<Result<Vec<_>>>()?;
        Ok(ParallelCorpus {
            source_lang: "src".into(),
            target_lang: "tgt".into(),
            pairs,
        })
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn source_side(&self) -> Corpus {
        Corpus {
            lang: Some(self.source_lang.clone()),
            sentences: self.pairs.iter().map(|p| p.source.clone()).collect(),
        }
    }

    pub fn target_side(&self) -> Corpus {
        Corpus {
            lang: Some(self.target_lang.clone()),
            sentences: self.pairs.iter().map(|p| p.target.clone()).collect(),
        }
    }

    fn with_pairs(&self, pairs: Vec<SentencePair>) -> ParallelCorpus {
        ParallelCorpus {
            source_lang: self.source_lang.clone(),
            target_lang: self.target_lang.clone(),
            pairs,
        }
    }

    pub fn save(&self, source_path: impl AsRef<Path>, target_path: impl AsRef<Path>) -> Result<()> {
        write_lines(source_path.as_ref(), self.pairs.iter().map(|p| p.source.as_str()))?;
        write_lines(target_path.as_ref(), self.pairs.iter().map(|p| p.target.as_str()))
    }

    pub fn save_tsv(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        for (i, p) in self.pairs.iter().enumerate() {
            if p.source.as_str().contains('\t') || p.target.as_str().contains('\t') {
                return Err(Error::Parse {
                    path: path.to_path_buf(),
                    line: i + 1,
                    message: "tab inside a sentence cannot be written as TSV".into(),
                });
            }
        }
        let lines = self
            .pairs
            .iter()
            .map(|p| format!("{}\t{}", p.source, p.target))
            .collect::<Vec<_>>();
        write_lines(path, lines.iter().map(String::as_str))
    }
}

/// Outcome of a corpus filter.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct FilterReport {
    pub kept: usize,
    pub dropped: usize,
}

impl FilterReport {
    pub fn total(&self) -> usize {
        self.kept + self.dropped
    }

    /// `dropped / total`, or 0 for an empty input.
    pub fn dropped_fraction(&self) -> f64 {
        match self.total() {
            0 => 0.0,
            n => self.dropped as f64 / n as f64,
        }
    }

    pub const TSV_HEADER: &'static str = "kept\tdropped\tdropped_fraction";

    pub fn to_tsv(&self) -> String {
        format!(
            "{}\n{}\t{}\t{:.6}\n",
            Self::TSV_HEADER,
            self.kept,
            self.dropped,
            self.dropped_fraction()
        )
    }
}

fn lang_from_path(path: &Path) -> Option<String> {
    path.extension()
        .and_then(|e| e.to_str())
        .filter(|e| !e.is_empty() && *e != "txt")
        .map(str::to_string)
}

/// Reads one sentence per line. A trailing line feed does not produce an
/// extra empty sentence; nothing else is stripped.
pub fn read_lines(path: &Path) -> Result<Vec<Sentence>> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    split_lines(&bytes, path).into_iter().map(|s| s.map(Sentence)).collect()
}

fn split_lines(bytes: &[u8], path: &Path) -> Vec<Result<String>> {
    if bytes.is_empty() {
        return Vec::new();
    }
    let body = bytes.strip_suffix(b"\n").unwrap_or(bytes);
    body.split(|&b| b == b'\n')
        .enumerate()
        .map(|(i, line)| {
            String::from_utf8(line.to_vec()).map_err(|_| Error::Decode {
                path: path.to_path_buf(),
                line: i + 1,
            })
        })
        .collect()
}

pub fn write_lines<'a>(path: &Path, lines: impl IntoIterator<Item = &'a str>) -> Result<()> {
    let mut buf = Vec::new();
    for line in lines {
        buf.extend_from_slice(line.as_bytes());
        buf.push(b'\n');
    }
    let mut f = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    f.write_all(&buf).map_err(|e| Error::io(path, e))
}

/// Zips two line-aligned files into a parallel corpus. Language tags are
/// taken from the file extensions (`train.en`, `train.et`).
pub fn load_parallel(source_path: impl AsRef<Path>, target_path: impl AsRef<Path>) -> Result<ParallelCorpus> {
    let (sp, tp) = (source_path.as_ref(), target_path.as_ref());
    let source = read_lines(sp)?;
    let target = read_lines(tp)?;
    if source.len() != target.len() {
        return Err(Error::Alignment {
            source_lines: source.len(),
            target_lines: target.len(),
        });
    }
    Ok(ParallelCorpus {
        source_lang: lang_from_path(sp).unwrap_or_else(|| "src".into()),
        target_lang: lang_from_path(tp).unwrap_or_else(|| "tgt".into()),
        pairs: source
            .into_iter()
            .zip(target)
            .map(|(source, target)| SentencePair { source, target })
            .collect(),
    })
}

/// Loads a two-column TSV corpus. Every line must contain exactly one tab.
pub fn load_parallel_tsv(path: impl AsRef<Path>) -> Result<ParallelCorpus> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    let mut pairs = Vec::new();
    for (i, line) in split_lines(&bytes, path).into_iter().enumerate() {
        let line = line?;
        let mut cols = line.split('\t');
        match (cols.next(), cols.next(), cols.next()) {
            (Some(s), Some(t), None) => pairs.push(SentencePair {
                source: Sentence(s.to_string()),
                target: Sentence(t.to_string()),
            }),
            _ => {
                return Err(Error::Parse {
                    path: path.to_path_buf(),
                    line: i + 1,
                    message: "expected exactly two tab-separated columns".into(),
                })
            }
        }
    }
    Ok(ParallelCorpus {
        source_lang: "src".into(),
        target_lang: "tgt".into(),
        pairs,
    })
}

fn partition_pairs(c: &ParallelCorpus, keep: impl Fn(&SentencePair) -> bool + Sync) -> (ParallelCorpus, FilterReport) {
    let flags: Vec<bool> = c.pairs.par_iter().map(&keep).collect();
    let kept: Vec<SentencePair> = c
        .pairs
        .iter()
        .zip(&flags)
        .filter(|(_, &k)| k)
        .map(|(p, _)| p.clone())
        .collect();
    let report = FilterReport {
        kept: kept.len(),
        dropped: c.len() - kept.len(),
    };
    (c.with_pairs(kept), report)
}

/// Keeps a pair iff both sides have between `min_words + 1` and `max_words`
/// whitespace words (so `min_words = 3` removes pairs of three or fewer
/// words). Pass `usize::MAX` for no upper limit.
pub fn filter_by_word_length(c: &ParallelCorpus, min_words: usize, max_words: usize) -> (ParallelCorpus, FilterReport) {
    let ok = |s: &Sentence| {
        let n = s.word_count();
        n > min_words && n <= max_words
    };
    partition_pairs(c, |p| ok(&p.source) && ok(&p.target))
}

/// Keeps a pair iff both sides segment to at most `max_tokens` wordpieces.
pub fn filter_by_subword_length(
    c: &ParallelCorpus,
    vocab: &Vocabulary,
    max_tokens: usize,
) -> (ParallelCorpus, FilterReport) {
    partition_pairs(c, |p| {
        vocab.token_count(p.source.as_str()) <= max_tokens && vocab.token_count(p.target.as_str()) <= max_tokens
    })
}

/// Draws `per_side` items uniformly without replacement from each of `a`
/// and `b` and returns the sample of `a` followed by the sample of `b`.
pub fn sample_equal<T: Clone>(a: &[T], b: &[T], per_side: usize, seed: u64) -> Result<Vec<T>> {
    sample_equal_many(&[a, b], per_side, seed)
}

/// [`sample_equal`] over any number of sources. Source `i` draws from RNG
/// stream `i` of `seed`.
pub fn sample_equal_many<T: Clone>(sources: &[&[T]], per_side: usize, seed: u64) -> Result<Vec<T>> {
    let available = sources.iter().map(|s| s.len()).min().unwrap_or(0);
    if per_side > available {
        return Err(Error::Size {
            requested: per_side,
            available,
        });
    }
    let mut out = Vec::with_capacity(per_side * sources.len());
    for (i, src) in sources.iter().enumerate() {
        let mut rng = rng::stream(seed, i as u64);
        out.extend(
            rng::sample_indices(src.len(), per_side, &mut rng)
                .into_iter()
                .map(|j| src[j].clone()),
        );
    }
    Ok(out)
}

/// Uniform subsample of `n` sentences, kept in their original order.
pub fn subsample<T: Clone>(items: &[T], n: usize, seed: u64) -> Result<Vec<T>> {
    if n > items.len() {
        return Err(Error::Size {
            requested: n,
            available: items.len(),
        });
    }
    let mut idx = rng::sample_indices(items.len(), n, &mut rng::seeded(seed));
    idx.sort_unstable();
    Ok(idx.into_iter().map(|i| items[i].clone()).collect())
}

/// `factor` copies of `authentic` followed by `synthetic`, then shuffled by
/// one [`rng::fisher_yates`] pass seeded with `seed`.
pub fn mix_with_oversample(
    authentic: &ParallelCorpus,
    synthetic: &ParallelCorpus,
    factor: usize,
    seed: u64,
) -> Result<ParallelCorpus> {
    if factor == 0 {
        return Err(Error::InvalidArgument("oversampling factor must be >= 1".into()));
    }
    let mut pairs = Vec::with_capacity(factor * authentic.len() + synthetic.len());
    for _ in 0..factor {
        pairs.extend(authentic.pairs.iter().cloned());
    }
    pairs.extend(synthetic.pairs.iter().cloned());
    rng::fisher_yates(&mut pairs, &mut rng::seeded(seed));
    Ok(authentic.with_pairs(pairs))
}

/// A case-preserving letter substitution with no fixed letter.
#[derive(Clone, Debug)]
pub struct LetterCipher {
    map: std::collections::BTreeMap<char, char>,
}

impl LetterCipher {
    /// Samples a derangement over the case-folded letters in `letters`.
    pub fn sample(letters: &BTreeSet<char>, rng: &mut SeededRng) -> Self {
        let mut keys: Vec<char> = letters.iter().copied().collect();
        if keys.len() == 1 {
            // A single letter cannot be deranged within itself; borrow a partner.
            let partner = if keys[0] == 'a' { 'b' } else { 'a' };
            keys.push(partner);
            keys.sort_unstable();
        }
        let perm = rng::derangement(keys.len(), rng);
        let map = keys.iter().zip(&perm).map(|(&k, &p)| (k, keys[p])).collect();
        LetterCipher { map }
    }

    pub fn apply_char(&self, c: char) -> char {
        let key = fold_case(c);
        let Some(&m) = self.map.get(&key) else {
            return c;
        };
        if c == key {
            return m;
        }
        let mut upper = m.to_uppercase();
        match (upper.next(), upper.next()) {
            (Some(u), None) if u != c => u,
            _ => m,
        }
    }

    pub fn apply_word(&self, word: &str) -> String {
        word.chars()
            .map(|c| if c.is_alphabetic() { self.apply_char(c) } else { c })
            .collect()
    }
}

fn fold_case(c: char) -> char {
    let mut lower = c.to_lowercase();
    match (lower.next(), lower.next()) {
        (Some(l), None) => l,
        _ => c,
    }
}

/// Applies `f` to every maximal non-whitespace run, keeping whitespace as is.
fn map_words(text: &str, mut f: impl FnMut(&str) -> String) -> String {
    let mut out = String::with_capacity(text.len());
    let mut start = None;
    for (i, c) in text.char_indices() {
        if c.is_whitespace() {
            if let Some(s) = start.take() {
                out.push_str(&f(&text[s..i]));
            }
            out.push(c);
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push_str(&f(&text[s..]));
    }
    out
}

fn sample_keep_set<'a>(side: impl Iterator<Item = &'a Sentence>, keep: f64, rng: &mut SeededRng) -> HashSet<String> {
    let types: BTreeSet<&str> = side.flat_map(Sentence::words).collect();
    let types: Vec<&str> = types.into_iter().collect();
    let k = ((keep * types.len() as f64) - 1e-9).ceil().max(0.0) as usize;
    let k = k.min(types.len());
    rng::sample_indices(types.len(), k, rng)
        .into_iter()
        .map(|i| types[i].to_string())
        .collect()
}

/// Builds a pseudo-related language pair: `keep` of the word types on each
/// side pass unchanged and every other word has its letters substituted
/// through one shared [`LetterCipher`]. Digits, punctuation and whitespace
/// are untouched.
///
/// Keep sets are sampled independently for source and target.
pub fn make_pseudo_related(c: &ParallelCorpus, keep: f64, seed: u64) -> Result<ParallelCorpus> {
    if !(0.0..=1.0).contains(&keep) {
        return Err(Error::InvalidArgument(format!("keep ratio {keep} is outside [0, 1]")));
    }
    let letters: BTreeSet<char> = c
        .pairs
        .iter()
        .flat_map(|p| p.source.as_str().chars().chain(p.target.as_str().chars()))
        .filter(|c| c.is_alphabetic())
        .map(fold_case)
        .collect();
    let cipher = LetterCipher::sample(&letters, &mut rng::stream(seed, 0));
    let keep_src = sample_keep_set(c.pairs.iter().map(|p| &p.source), keep, &mut rng::stream(seed, 1));
    let keep_tgt = sample_keep_set(c.pairs.iter().map(|p| &p.target), keep, &mut rng::stream(seed, 2));

    let transform = |s: &Sentence, keep_set: &HashSet<String>| {
        Sentence(map_words(s.as_str(), |w| {
            if keep_set.contains(w) {
                w.to_string()
            } else {
                cipher.apply_word(w)
            }
        }))
    };
    let pairs = c
        .pairs
        .iter()
        .map(|p| SentencePair {
            source: transform(&p.source, &keep_src),
            target: transform(&p.target, &keep_tgt),
        })
        .collect();
    Ok(c.with_pairs(pairs))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Corruption {
    ShuffleSource,
    ShuffleTarget,
    ShuffleBoth,
    SortTarget,
    ShufflePairing,
}

impl FromStr for Corruption {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "shuffle_source" | "shuffle-source" => Corruption::ShuffleSource,
            "shuffle_target" | "shuffle-target" => Corruption::ShuffleTarget,
            "shuffle_both" | "shuffle-both" => Corruption::ShuffleBoth,
            "sort_target" | "sort-target" => Corruption::SortTarget,
            "shuffle_pairing" | "shuffle-pairing" => Corruption::ShufflePairing,
            other => return Err(Error::InvalidArgument(format!("unknown corruption mode `{other}`"))),
        })
    }
}

fn shuffle_words(s: &Sentence, rng: &mut SeededRng) -> Sentence {
    let mut words: Vec<&str> = s.words().collect();
    rng::fisher_yates(&mut words, rng);
    Sentence(words.join(" "))
}

fn sort_words(s: &Sentence) -> Sentence {
    let mut words: Vec<&str> = s.words().collect();
    words.sort_unstable();
    Sentence(words.join(" "))
}

/// Breaks word order or sentence pairing. Corrupted sentences are re-joined
/// with single spaces; untouched sides are returned verbatim.
pub fn corrupt_word_order(c: &ParallelCorpus, mode: Corruption, seed: u64) -> ParallelCorpus {
    let mut rng = rng::seeded(seed);
    let pairs = match mode {
        Corruption::ShufflePairing => {
            let mut targets: Vec<Sentence> = c.pairs.iter().map(|p| p.target.clone()).collect();
            rng::fisher_yates(&mut targets, &mut rng);
            c.pairs
                .iter()
                .zip(targets)
                .map(|(p, target)| SentencePair {
                    source: p.source.clone(),
                    target,
                })
                .collect()
        }
        _ => c
            .pairs
            .iter()
            .map(|p| {
                let (mut source, mut target) = (p.source.clone(), p.target.clone());
                match mode {
                    Corruption::ShuffleSource => source = shuffle_words(&source, &mut rng),
                    Corruption::ShuffleTarget => target = shuffle_words(&target, &mut rng),
                    Corruption::ShuffleBoth => {
                        source = shuffle_words(&source, &mut rng);
                        target = shuffle_words(&target, &mut rng);
                    }
                    Corruption::SortTarget => target = sort_words(&target),
                    Corruption::ShufflePairing => unreachable!(),
                }
                SentencePair { source, target }
            })
            .collect(),
    };
    c.with_pairs(pairs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pc(pairs: &[(&str, &str)]) -> ParallelCorpus {
        ParallelCorpus::from_pairs(pairs.iter().copied()).unwrap()
    }

    fn write(dir: &tempfile::TempDir, name: &str, content: &[u8]) -> std::path::PathBuf {
        let p = dir.path().join(name);
        std::fs::File::create(&p).unwrap().write_all(content).unwrap();
        p
    }

    #[test]
    fn load_zips_lines() {
        let d = tempfile::tempdir().unwrap();
        let s = write(&d, "c.en", b"a\nb\nc\n");
        let t = write(&d, "c.et", b"x\ny\nz\n");
        let c = load_parallel(&s, &t).unwrap();
        assert_eq!(c.len(), 3);
        assert_eq!(c.source_lang, "en");
        assert_eq!(c.target_lang, "et");
        assert_eq!(c.pairs[1].target.as_str(), "y");
    }

    #[test]
    fn load_rejects_misalignment() {
        let d = tempfile::tempdir().unwrap();
        let s = write(&d, "s", b"a\nb\nc\n");
        let t = write(&d, "t", b"a\nb\nc\nd\n");
        match load_parallel(&s, &t) {
            Err(Error::Alignment {
                source_lines: 3,
                target_lines: 4,
            }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn load_empty_files() {
        let d = tempfile::tempdir().unwrap();
        let s = write(&d, "s", b"");
        let t = write(&d, "t", b"");
        assert!(load_parallel(&s, &t).unwrap().is_empty());
    }

    #[test]
    fn load_reports_decode_line() {
        let d = tempfile::tempdir().unwrap();
        let s = write(&d, "s", b"ok\n\xff\xfe\n");
        match Corpus::load(&s) {
            Err(Error::Decode { line: 2, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn load_preserves_text_verbatim() {
        let d = tempfile::tempdir().unwrap();
        let s = write(&d, "s", b"  Hello,  world!\r\n\nlast");
        let c = Corpus::load(&s).unwrap();
        let lines: Vec<&str> = c.iter().collect();
        assert_eq!(lines, ["  Hello,  world!\r", "", "last"]);
    }

    #[test]
    fn tsv_rejects_extra_tabs() {
        let d = tempfile::tempdir().unwrap();
        let ok = write(&d, "ok.tsv", b"a b\tx y\n");
        assert_eq!(load_parallel_tsv(&ok).unwrap().len(), 1);
        let bad = write(&d, "bad.tsv", b"a\tb\tc\n");
        assert!(matches!(load_parallel_tsv(&bad), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn word_length_filter_bounds() {
        let c = pc(&[("a b c", "x y z"), ("a b c d", "w x y z")]);
        let (kept, r) = filter_by_word_length(&c, 3, 75);
        assert_eq!(kept.len(), 1);
        assert_eq!(kept.pairs[0].source.as_str(), "a b c d");
        assert_eq!((r.kept, r.dropped), (1, 1));

        let long = vec!["w"; 76].join(" ");
        let c = pc(&[(long.as_str(), "a b c d")]);
        assert_eq!(filter_by_word_length(&c, 3, 75).1.dropped, 1);

        let c = pc(&[("", ""), ("a", "b")]);
        let (kept, r) = filter_by_word_length(&c, 0, usize::MAX);
        assert_eq!(kept.len(), 1); // the empty pair has zero words
        assert_eq!(r.total(), 2);
        let c = pc(&[("a", "b"), ("c d", "e")]);
        let (kept, r) = filter_by_word_length(&c, 0, usize::MAX);
        assert_eq!(kept, c);
        assert_eq!(r.dropped, 0);
    }

    #[test]
    fn filter_report_tsv() {
        let r = FilterReport { kept: 3, dropped: 1 };
        assert_eq!(r.to_tsv(), "kept\tdropped\tdropped_fraction\n3\t1\t0.250000\n");
        assert_eq!(FilterReport::default().dropped_fraction(), 0.0);
    }

    #[test]
    fn sample_equal_counts_and_determinism() {
        let a: Vec<u32> = (0..500).collect();
        let b: Vec<u32> = (1000..1300).collect();
        let s = sample_equal(&a, &b, 100, 9).unwrap();
        assert_eq!(s.len(), 200);
        assert_eq!(s.iter().filter(|&&x| x < 1000).count(), 100);
        assert_eq!(s, sample_equal(&a, &b, 100, 9).unwrap());
        assert!(matches!(
            sample_equal(&a, &b, 301, 9),
            Err(Error::Size {
                requested: 301,
                available: 300
            })
        ));
    }

    #[test]
    fn sample_equal_full_is_permutation() {
        let a: Vec<u32> = (0..20).collect();
        let b: Vec<u32> = (20..40).collect();
        let mut s = sample_equal(&a, &b, 20, 1).unwrap();
        s.sort();
        assert_eq!(s, (0..40).collect::<Vec<_>>());
    }

    #[test]
    fn oversample_sizes_and_multiplicity() {
        let auth = pc(&[("a1", "b1"), ("a2", "b2")]);
        let synth = pc(&[("s1", "t1"), ("s2", "t2"), ("s3", "t3"), ("s4", "t4"), ("s5", "t5")]);
        let mixed = mix_with_oversample(&auth, &synth, 3, 4).unwrap();
        assert_eq!(mixed.len(), 11);
        for p in &auth.pairs {
            assert_eq!(mixed.pairs.iter().filter(|q| *q == p).count(), 3);
        }
        for p in &synth.pairs {
            assert_eq!(mixed.pairs.iter().filter(|q| *q == p).count(), 1);
        }
        assert_eq!(mixed, mix_with_oversample(&auth, &synth, 3, 4).unwrap());
        assert!(mix_with_oversample(&auth, &synth, 0, 4).is_err());
    }

    #[test]
    fn pseudo_related_full_keep_is_identity() {
        let c = pc(&[("Pardon? Have you seen this cat?", "Vabandust? Kas sa nägid seda kassi?")]);
        assert_eq!(make_pseudo_related(&c, 1.0, 3).unwrap(), c);
    }

    #[test]
    fn pseudo_related_zero_keep_changes_every_lettered_word() {
        let c = pc(&[
            ("Pardon? Have you seen this cat?", "I 2 saw it, 42 times."),
            ("Ärger über Öl — 3x", "ΣΟΦΊΑ σοφία ς"),
        ]);
        for seed in 0..20 {
            let out = make_pseudo_related(&c, 0.0, seed).unwrap();
            for (p, q) in c.pairs.iter().zip(&out.pairs) {
                for (a, b) in [(&p.source, &q.source), (&p.target, &q.target)] {
                    assert_eq!(!a.as_str().is_empty(), !b.as_str().is_empty());
                    let wa: Vec<&str> = a.words().collect();
                    let wb: Vec<&str> = b.words().collect();
                    assert_eq!(wa.len(), wb.len());
                    for (x, y) in wa.iter().zip(&wb) {
                        assert_eq!(x.chars().count(), y.chars().count());
                        if x.chars().any(char::is_alphabetic) {
                            assert_ne!(x, y, "seed {seed}");
                        } else {
                            assert_eq!(x, y);
                        }
                        for (cx, cy) in x.chars().zip(y.chars()) {
                            assert_eq!(cx.is_alphabetic(), cy.is_alphabetic());
                            if !cx.is_alphabetic() {
                                assert_eq!(cx, cy);
                            } else {
                                assert_ne!(cx, cy);
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn pseudo_related_shape_of_example() {
        let c = pc(&[("Pardon? Have you seen this cat?", "x")]);
        let out = make_pseudo_related(&c, 0.0, 11).unwrap();
        let s = out.pairs[0].source.as_str();
        let lens: Vec<usize> = s.split(' ').map(|w| w.chars().count()).collect();
        assert_eq!(lens, [7, 4, 3, 4, 4, 4]);
        assert!(s.chars().next().unwrap().is_uppercase());
        assert!(s.split(' ').nth(1).unwrap().chars().next().unwrap().is_uppercase());
        assert_eq!(s.matches('?').count(), 2);
    }

    #[test]
    fn pseudo_related_keeps_word_types_consistently() {
        let c = pc(&[("cat cat dog", "a"), ("dog cat", "b")]);
        let out = make_pseudo_related(&c, 0.5, 5).unwrap();
        let words: Vec<&str> = out.pairs.iter().flat_map(|p| p.source.words()).collect();
        // the same input word always maps to the same output word
        assert_eq!(words[0], words[1]);
        assert_eq!(words[0], words[4]);
        assert_eq!(words[2], words[3]);
    }

    #[test]
    fn pseudo_related_single_letter_alphabet() {
        let c = pc(&[("aa a", "A")]);
        let out = make_pseudo_related(&c, 0.0, 0).unwrap();
        assert_eq!(out.pairs[0].source.as_str(), "bb b");
        assert_eq!(out.pairs[0].target.as_str(), "B");
    }

    #[test]
    fn sort_target_orders_words() {
        let c = pc(&[("z y", "b a c")]);
        let out = corrupt_word_order(&c, Corruption::SortTarget, 0);
        assert_eq!(out.pairs[0].target.as_str(), "a b c");
        assert_eq!(out.pairs[0].source.as_str(), "z y");
    }

    #[test]
    fn shuffles_preserve_word_multisets() {
        let c = pc(&[("the quick brown fox jumps", "a b c d e f"), ("one two three", "x y")]);
        for mode in [
            Corruption::ShuffleSource,
            Corruption::ShuffleTarget,
            Corruption::ShuffleBoth,
        ] {
            let out = corrupt_word_order(&c, mode, 42);
            for (p, q) in c.pairs.iter().zip(&out.pairs) {
                for (a, b) in [(&p.source, &q.source), (&p.target, &q.target)] {
                    let mut x: Vec<&str> = a.words().collect();
                    let mut y: Vec<&str> = b.words().collect();
                    x.sort();
                    y.sort();
                    assert_eq!(x, y);
                }
            }
            assert_eq!(out, corrupt_word_order(&c, mode, 42));
        }
    }

    #[test]
    fn shuffle_pairing_preserves_target_multiset() {
        let c = pc(&[("s1", "t1"), ("s2", "t2"), ("s3", "t3")]);
        let out = corrupt_word_order(&c, Corruption::ShufflePairing, 123);
        let sources: Vec<_> = out.pairs.iter().map(|p| p.source.clone()).collect();
        assert_eq!(sources, c.source_side().sentences);
        let mut before = c.target_side().sentences;
        let mut after = out.target_side().sentences;
        before.sort();
        after.sort();
        assert_eq!(before, after);
    }

    #[test]
    fn subsample_keeps_order() {
        let items: Vec<u32> = (0..100).collect();
        let s = subsample(&items, 10, 2).unwrap();
        assert_eq!(s.len(), 10);
        assert!(s.windows(2).all(|w| w[0] < w[1]));
    }
}
