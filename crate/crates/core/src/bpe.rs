//! Byte pair encoding.
//!
//! A [`MergeTable`] is learned from word-type frequencies: every word gets
//! the end-of-word symbol `</w>` appended and is split into characters, then
//! the most frequent adjacent symbol pair is merged repeatedly. Ties on pair
//! frequency are broken by the frequency of the left symbol (higher first),
//! then by lexicographic order of `(left, right)`, where `</w>` sorts after
//! every character.
//!
//! Characters never seen during learning stay single-character tokens when
//! applying; plain BPE has no byte fallback.

use std::cmp::{Ordering, Reverse};
use std::collections::{BTreeMap, BTreeSet, BinaryHeap, HashMap, HashSet};
use std::fmt;
use std::fs;
use std::path::Path;

use crate::corpus::Corpus;
use crate::{Error, Result, FORMAT_VERSION};

pub const END_OF_WORD: &str = "</w>";
pub const CONTINUATION: &str = "@@";

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MergeRule {
    pub left: String,
    pub right: String,
}

impl MergeRule {
    pub fn new(left: impl Into<String>, right: impl Into<String>) -> Result<Self> {
        let (left, right) = (left.into(), right.into());
        if left.is_empty() || right.is_empty() {
            return Err(Error::InvalidMergeTable("merge rule with an empty side".into()));
        }
        if left.chars().chain(right.chars()).any(char::is_whitespace) {
            return Err(Error::InvalidMergeTable(format!(
                "merge rule `{left} {right}` contains whitespace"
            )));
        }
        Ok(MergeRule { left, right })
    }

    pub fn merged(&self) -> String {
        format!("{}{}", self.left, self.right)
    }
}

impl fmt::Display for MergeRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.left, self.right)
    }
}

/// Ordered merge rules; position is application priority.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MergeTable {
    rules: Vec<MergeRule>,
    ranks: HashMap<(String, String), usize>,
}

impl MergeTable {
    pub fn from_rules(rules: Vec<MergeRule>) -> Result<Self> {
        let mut ranks = HashMap::with_capacity(rules.len());
        for (i, r) in rules.iter().enumerate() {
            if ranks.insert((r.left.clone(), r.right.clone()), i).is_some() {
                return Err(Error::InvalidMergeTable(format!("duplicate rule `{r}`")));
            }
        }
        Ok(MergeTable { rules, ranks })
    }

    pub fn rules(&self) -> &[MergeRule] {
        &self.rules
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn rank(&self, left: &str, right: &str) -> Option<usize> {
        self.ranks.get(&(left.to_string(), right.to_string())).copied()
    }

    /// Parses the merge file format: an optional `#version:` header line,
    /// then one `left right` rule per line.
    pub fn parse(text: &str) -> Result<Self> {
        let mut rules = Vec::new();
        for (i, line) in text.lines().enumerate() {
            if i == 0 && line.starts_with("#version") {
                continue;
            }
            if line.is_empty() {
                continue;
            }
            let mut parts = line.split(' ');
            match (parts.next(), parts.next(), parts.next()) {
                (Some(l), Some(r), None) => rules.push(MergeRule::new(l, r)?),
                _ => {
                    return Err(Error::InvalidMergeTable(format!(
                        "line {}: expected `left right`",
                        i + 1
                    )))
                }
            }
        }
        MergeTable::from_rules(rules)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        MergeTable::parse(&text)
    }

    pub fn to_file_string(&self) -> String {
        let mut s = format!("#version: {FORMAT_VERSION}\n");
        for r in &self.rules {
            s.push_str(&r.left);
            s.push(' ');
            s.push_str(&r.right);
            s.push('\n');
        }
        s
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_file_string()).map_err(|e| Error::io(path, e))
    }

    /// Symbols of `word` after merging, `</w>` still attached.
    pub fn merge_symbols(&self, word: &str) -> Vec<String> {
        let mut symbols: Vec<String> = word.chars().map(String::from).collect();
        symbols.push(END_OF_WORD.to_string());
        loop {
            let best = symbols
                .windows(2)
                .filter_map(|w| self.ranks.get(&(w[0].clone(), w[1].clone())))
                .min()
                .copied();
            let Some(rank) = best else { break };
            let rule = &self.rules[rank];
            symbols = merge_pair(&symbols, &rule.left, &rule.right);
        }
        symbols
    }

    /// Segments one word; see [`apply_bpe`].
    pub fn apply(&self, word: &str) -> Vec<String> {
        render(self.merge_symbols(word))
    }

    /// Segments whitespace-separated text and joins the tokens with spaces.
    pub fn apply_line(&self, line: &str) -> String {
        line.split_whitespace()
            .flat_map(|w| self.apply(w))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

fn merge_pair(symbols: &[String], left: &str, right: &str) -> Vec<String> {
    let mut out = Vec::with_capacity(symbols.len());
    let mut i = 0;
    while i < symbols.len() {
        if i + 1 < symbols.len() && symbols[i] == left && symbols[i + 1] == right {
            out.push(format!("{left}{right}"));
            i += 2;
        } else {
            out.push(symbols[i].clone());
            i += 1;
        }
    }
    out
}

fn render(mut symbols: Vec<String>) -> Vec<String> {
    if let Some(last) = symbols.last_mut() {
        if let Some(stripped) = last.strip_suffix(END_OF_WORD) {
            *last = stripped.to_string();
        }
        if last.is_empty() {
            symbols.pop();
        }
    }
    let n = symbols.len();
    for s in symbols.iter_mut().take(n.saturating_sub(1)) {
        s.push_str(CONTINUATION);
    }
    symbols
}

/// Segments `word` with `table`: the word plus `</w>` is split into
/// characters, merges are applied by priority until none applies, and every
/// token except the last gets `@@`.
pub fn apply_bpe(table: &MergeTable, word: &str) -> Vec<String> {
    table.apply(word)
}

/// Word-type frequencies over whitespace words of all corpora.
pub fn word_counts<'a>(corpora: impl IntoIterator<Item = &'a Corpus>) -> BTreeMap<String, u64> {
    let mut counts = BTreeMap::new();
    for c in corpora {
        for s in c.iter() {
            for w in s.split_whitespace() {
                *counts.entry(w.to_string()).or_insert(0) += 1;
            }
        }
    }
    counts
}

/// Learns up to `num_merges` rules jointly over the concatenation of
/// `corpora`.
pub fn learn_bpe(corpora: &[Corpus], num_merges: usize) -> Result<MergeTable> {
    let counts = word_counts(corpora);
    if counts.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    learn_bpe_from_counts(&counts, num_merges)
}

type Pair = (u32, u32);

fn sort_key(symbol: &str) -> String {
    match symbol.strip_suffix(END_OF_WORD) {
        Some(stem) => format!("{stem}{}", char::MAX),
        None => symbol.to_string(),
    }
}

struct Learner {
    names: Vec<String>,
    sort_keys: Vec<String>,
    ids: HashMap<String, u32>,
    words: Vec<Vec<u32>>,
    freqs: Vec<u64>,
    pair_counts: HashMap<Pair, u64>,
    pair_words: HashMap<Pair, Vec<usize>>,
    symbol_counts: Vec<u64>,
    heap: BinaryHeap<(u64, Reverse<Pair>)>,
}

impl Learner {
    fn intern(&mut self, s: &str) -> u32 {
        if let Some(&id) = self.ids.get(s) {
            return id;
        }
        let id = self.names.len() as u32;
        self.names.push(s.to_string());
        self.sort_keys.push(sort_key(s));
        self.ids.insert(s.to_string(), id);
        self.symbol_counts.push(0);
        id
    }

    fn new(counts: &BTreeMap<String, u64>) -> Self {
        let mut l = Learner {
            names: Vec::new(),
            sort_keys: Vec::new(),
            ids: HashMap::new(),
            words: Vec::with_capacity(counts.len()),
            freqs: Vec::with_capacity(counts.len()),
            pair_counts: HashMap::new(),
            pair_words: HashMap::new(),
            symbol_counts: Vec::new(),
            heap: BinaryHeap::new(),
        };
        for (w, &f) in counts {
            let mut syms: Vec<u32> = w.chars().map(|c| l.intern(c.encode_utf8(&mut [0; 4]))).collect();
            syms.push(l.intern(END_OF_WORD));
            l.words.push(syms);
            l.freqs.push(f);
        }
        let mut touched = HashSet::new();
        for i in 0..l.words.len() {
            l.add_word(i, &mut touched);
        }
        for p in touched {
            l.heap.push((l.pair_counts[&p], Reverse(p)));
        }
        l
    }

    fn add_word(&mut self, i: usize, touched: &mut HashSet<Pair>) {
        let f = self.freqs[i];
        let w = &self.words[i];
        for &s in w {
            self.symbol_counts[s as usize] += f;
        }
        for win in w.windows(2) {
            let p = (win[0], win[1]);
            *self.pair_counts.entry(p).or_insert(0) += f;
            self.pair_words.entry(p).or_default().push(i);
            touched.insert(p);
        }
    }

    fn remove_word(&mut self, i: usize, touched: &mut HashSet<Pair>) {
        let f = self.freqs[i];
        let w = &self.words[i];
        for &s in w {
            self.symbol_counts[s as usize] -= f;
        }
        for win in w.windows(2) {
            let p = (win[0], win[1]);
            let c = self.pair_counts.get_mut(&p).expect("pair counted");
            *c -= f;
            touched.insert(p);
        }
    }

    fn better(&self, a: Pair, b: Pair) -> Ordering {
        // Greater is better: higher left-symbol frequency, then smaller (left, right).
        self.symbol_counts[a.0 as usize]
            .cmp(&self.symbol_counts[b.0 as usize])
            .then_with(|| {
                let ka = (&self.sort_keys[a.0 as usize], &self.sort_keys[a.1 as usize]);
                let kb = (&self.sort_keys[b.0 as usize], &self.sort_keys[b.1 as usize]);
                kb.cmp(&ka)
            })
    }

    /// Pops the best pair, or `None` when no pair with a positive count remains.
    fn pop_best(&mut self) -> Option<Pair> {
        let top = loop {
            let (count, Reverse(p)) = self.heap.pop()?;
            if count > 0 && self.pair_counts.get(&p) == Some(&count) {
                break (count, p);
            }
        };
        let mut group: BTreeSet<Pair> = BTreeSet::from([top.1]);
        while let Some(&(count, Reverse(p))) = self.heap.peek() {
            if count != top.0 {
                break;
            }
            self.heap.pop();
            if self.pair_counts.get(&p) == Some(&count) {
                group.insert(p);
            }
        }
        let best = group
            .iter()
            .copied()
            .max_by(|&a, &b| self.better(a, b))
            .expect("group is non-empty");
        for &p in &group {
            if p != best {
                self.heap.push((top.0, Reverse(p)));
            }
        }
        Some(best)
    }

    fn merge(&mut self, pair: Pair) {
        let merged_name = format!("{}{}", self.names[pair.0 as usize], self.names[pair.1 as usize]);
        let merged = self.intern(&merged_name);
        let mut words = self.pair_words.remove(&pair).unwrap_or_default();
        words.sort_unstable();
        words.dedup();
        let mut touched = HashSet::new();
        for i in words {
            if !self.words[i].windows(2).any(|w| (w[0], w[1]) == pair) {
                continue;
            }
            self.remove_word(i, &mut touched);
            let old = std::mem::take(&mut self.words[i]);
            let mut new = Vec::with_capacity(old.len());
            let mut j = 0;
            while j < old.len() {
                if j + 1 < old.len() && (old[j], old[j + 1]) == pair {
                    new.push(merged);
                    j += 2;
                } else {
                    new.push(old[j]);
                    j += 1;
                }
            }
            self.words[i] = new;
            self.add_word(i, &mut touched);
        }
        for p in touched {
            let c = self.pair_counts[&p];
            if c > 0 {
                self.heap.push((c, Reverse(p)));
            }
        }
    }
}

/// Learns merges from explicit word-type frequencies.
pub fn learn_bpe_from_counts(counts: &BTreeMap<String, u64>, num_merges: usize) -> Result<MergeTable> {
    if num_merges == 0 {
        return Err(Error::InvalidArgument("num_merges must be >= 1".into()));
    }
    if counts.values().all(|&c| c == 0) {
        return Err(Error::EmptyCorpus);
    }
    let mut learner = Learner::new(counts);
    let mut rules = Vec::with_capacity(num_merges);
    let mut emitted = HashSet::new();
    while rules.len() < num_merges {
        let Some(pair) = learner.pop_best() else { break };
        let rule = MergeRule {
            left: learner.names[pair.0 as usize].clone(),
            right: learner.names[pair.1 as usize].clone(),
        };
        // A pair can reappear when different merge paths build the same
        // symbol; the earlier rule already covers it.
        if emitted.insert(rule.clone()) {
            rules.push(rule);
        }
        learner.merge(pair);
    }
    MergeTable::from_rules(rules)
}

/// All contiguous substrings of length >= 2 of `^word$`.
pub fn enumerate_substrings(word: &str) -> BTreeSet<String> {
    let decorated: Vec<char> = std::iter::once('^')
        .chain(word.chars())
        .chain(std::iter::once('$'))
        .collect();
    let n = decorated.len();
    let mut out = BTreeSet::new();
    for start in 0..n {
        for end in start + 2..=n {
            out.insert(decorated[start..end].iter().collect());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rule(l: &str, r: &str) -> MergeRule {
        MergeRule::new(l, r).unwrap()
    }

    fn figure_table() -> MergeTable {
        MergeTable::from_rules(vec![
            rule("r", "</w>"),
            rule("o", "l"),
            rule("e", "r</w>"),
            rule("d", "er</w>"),
            rule("w", "i"),
        ])
        .unwrap()
    }

    #[test]
    fn figure_table_segments_older_and_old() {
        let t = figure_table();
        assert_eq!(apply_bpe(&t, "older"), ["ol@@", "der"]);
        assert_eq!(apply_bpe(&t, "old"), ["ol@@", "d"]);
        assert_eq!(apply_bpe(&t, "wider"), ["wi@@", "der"]);
    }

    #[test]
    fn empty_table_splits_characters() {
        assert_eq!(apply_bpe(&MergeTable::default(), "cat"), ["c@@", "a@@", "t"]);
    }

    #[test]
    fn single_merge_on_aa() {
        let counts = BTreeMap::from([("aa".to_string(), 1)]);
        let t = learn_bpe_from_counts(&counts, 1).unwrap();
        assert_eq!(t.rules(), [rule("a", "a")]);
    }

    #[test]
    fn learning_stops_when_no_pairs_remain() {
        let counts = BTreeMap::from([("ab".to_string(), 3)]);
        let t = learn_bpe_from_counts(&counts, 10).unwrap();
        // a b </w> → ab </w> → ab</w>
        assert_eq!(t.len(), 2);
        assert_eq!(apply_bpe(&t, "ab"), ["ab"]);
    }

    #[test]
    fn tie_break_prefers_frequent_left_symbol() {
        // all pairs tie at 2; `d` is the most frequent left symbol
        let counts = ["old", "older", "wider"].iter().map(|w| (w.to_string(), 1)).collect();
        let t = learn_bpe_from_counts(&counts, 1).unwrap();
        assert_eq!(t.rules(), [rule("d", "e")]);
    }

    #[test]
    fn empty_inputs_are_rejected() {
        assert!(matches!(learn_bpe(&[Corpus::default()], 5), Err(Error::EmptyCorpus)));
        let c = Corpus::from_lines(["a"]).unwrap();
        assert!(learn_bpe(&[c], 0).is_err());
    }

    #[test]
    fn duplicate_rules_rejected() {
        assert!(MergeTable::from_rules(vec![rule("a", "b"), rule("a", "b")]).is_err());
        assert!(MergeRule::new("", "b").is_err());
    }

    #[test]
    fn merge_file_roundtrip() {
        let t = figure_table();
        let s = t.to_file_string();
        assert!(s.starts_with("#version: xfervocab-1\n"));
        assert_eq!(s.lines().nth(1), Some("r </w>"));
        assert_eq!(MergeTable::parse(&s).unwrap(), t);
        assert!(MergeTable::parse("a b c\n").is_err());
    }

    #[test]
    fn unknown_characters_stay_single() {
        let t = figure_table();
        assert_eq!(apply_bpe(&t, "ž"), ["ž"]);
        assert_eq!(t.apply_line("older  ž"), "ol@@ der ž");
    }

    #[test]
    fn substrings_of_cat() {
        let expected: BTreeSet<String> = ["^c", "ca", "at", "t$", "^ca", "cat", "at$", "^cat", "cat$", "^cat$"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        assert_eq!(enumerate_substrings("cat"), expected);
    }

    #[test]
    fn substrings_of_single_letter() {
        let expected: BTreeSet<String> = ["^a", "a$", "^a$"].iter().map(|s| s.to_string()).collect();
        assert_eq!(enumerate_substrings("a"), expected);
    }
}
