//! Cold-start vocabulary transformation.
//!
//! A parent vocabulary is rewritten slot by slot so that it holds exactly the
//! child's tokens while every token the two share stays at its parent index.
//! The embedding matrix is then reused untouched: row `i` keeps belonging to
//! slot `i`, only the token label changes.

mod bundle;
mod levenshtein;

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

pub use bundle::{emit_transfer_bundle, unused_parent_slots, BundlePaths, EmbeddingFormat, EmbeddingMatrix};
pub use levenshtein::edit_distance;

use crate::corpus::Corpus;
use crate::rng;
use crate::tsv;
use crate::wordpiece::{learn_wordpiece, VocabSpec, Vocabulary};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variant {
    /// Unshared slots take unused child tokens in child-vocabulary order.
    Frequency,
    /// All child tokens go to uniformly shuffled slots.
    EverythingRandom,
    /// Shared tokens stay; the rest go to shuffled unshared slots.
    UnmatchedRandom,
    /// Shared tokens stay; the rest are paired by increasing edit distance.
    Levenshtein,
}

impl Variant {
    pub const ALL: [Variant; 4] = [
        Variant::Frequency,
        Variant::EverythingRandom,
        Variant::UnmatchedRandom,
        Variant::Levenshtein,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Variant::Frequency => "frequency",
            Variant::EverythingRandom => "everything_random",
            Variant::UnmatchedRandom => "unmatched_random",
            Variant::Levenshtein => "levenshtein",
        }
    }

    pub fn is_random(self) -> bool {
        matches!(self, Variant::EverythingRandom | Variant::UnmatchedRandom)
    }

    /// Whether tokens shared by parent and child keep their parent slot.
    pub fn preserves_shared(self) -> bool {
        self != Variant::EverythingRandom
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.replace('-', "_");
        Variant::ALL
            .into_iter()
            .find(|v| v.name() == norm)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown transfer variant `{s}`")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MappingEntry {
    pub slot: usize,
    pub parent_token: String,
    /// Child token placed in this slot, or `None` when the child vocabulary
    /// ran out and the slot retains a parent token.
    pub child_token: Option<String>,
    /// Token written to the output vocabulary.
    pub token: String,
    pub shared: bool,
}

impl MappingEntry {
    pub fn is_fallback(&self) -> bool {
        self.child_token.is_none()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VocabMapping {
    pub entries: Vec<MappingEntry>,
    pub variant: Variant,
    pub seed: Option<u64>,
}

impl VocabMapping {
    pub const TSV_HEADER: &'static str = "slot\tparent\tchild\tshared";

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn vocabulary(&self) -> Vocabulary {
        Vocabulary::new(self.entries.iter().map(|e| e.token.clone()).collect()).expect("mapping tokens are unique")
    }

    pub fn shared_count(&self) -> usize {
        self.entries.iter().filter(|e| e.shared).count()
    }

    pub fn fallback_count(&self) -> usize {
        self.entries.iter().filter(|e| e.is_fallback()).count()
    }

    /// `slot parent child shared`; the child column is empty for slots that
    /// retained a parent token.
    pub fn to_tsv(&self) -> String {
        let mut s = String::from(Self::TSV_HEADER);
        s.push('\n');
        for e in &self.entries {
            let slot = e.slot.to_string();
            let child = e.child_token.as_deref().unwrap_or("");
            s.push_str(&tsv::row([slot.as_str(), &e.parent_token, child, bool_str(e.shared)]));
            s.push('\n');
        }
        s
    }
}

fn bool_str(b: bool) -> &'static str {
    if b {
        "true"
    } else {
        "false"
    }
}

/// Learns a child vocabulary of the parent's size from `child_corpus` and
/// maps it onto the parent with [`remap_vocab`].
pub fn transform_vocab(
    parent: &Vocabulary,
    child_corpus: &Corpus,
    variant: Variant,
    seed: Option<u64>,
) -> Result<(Vocabulary, VocabMapping)> {
    transform_vocab_with(
        parent,
        child_corpus,
        variant,
        seed,
        &VocabSpec::with_target(parent.len()),
    )
}

/// [`transform_vocab`] with explicit learner settings; `spec.target_size`
/// is overridden by the parent size.
pub fn transform_vocab_with(
    parent: &Vocabulary,
    child_corpus: &Corpus,
    variant: Variant,
    seed: Option<u64>,
    spec: &VocabSpec,
) -> Result<(Vocabulary, VocabMapping)> {
    if parent.is_empty() {
        return Err(Error::InvalidVocabulary("parent vocabulary is empty".into()));
    }
    let spec = VocabSpec {
        target_size: parent.len(),
        ..spec.clone()
    };
    let child = learn_wordpiece(std::slice::from_ref(child_corpus), &spec)?.vocab;
    let mapping = remap_vocab(parent, &child, variant, seed)?;
    Ok((mapping.vocabulary(), mapping))
}

/// Maps `child` onto the slots of `parent`.
///
/// A child larger than the parent is first cut to the parent size with
/// [`Vocabulary::truncate`] and then, if its alphabet alone is too large, to
/// its first `|parent|` tokens. A smaller child leaves slots that retain a
/// parent token not in the child vocabulary.
pub fn remap_vocab(
    parent: &Vocabulary,
    child: &Vocabulary,
    variant: Variant,
    seed: Option<u64>,
) -> Result<VocabMapping> {
    if variant.is_random() && seed.is_none() {
        return Err(Error::InvalidArgument(format!("variant {variant} requires a seed")));
    }
    let n = parent.len();
    let mut child_tokens: Vec<String> = if child.len() > n {
        child.truncate(n).tokens().to_vec()
    } else {
        child.tokens().to_vec()
    };
    if child_tokens.len() > n {
        log::warn!("child alphabet exceeds parent size; keeping the first {n} child tokens");
        child_tokens.truncate(n);
    }
    let in_child: HashSet<&str> = child_tokens.iter().map(String::as_str).collect();

    let assigned: Vec<Option<usize>> = match variant {
        Variant::Frequency => assign_frequency(parent, &child_tokens, &in_child),
        Variant::UnmatchedRandom => assign_unmatched_random(parent, &child_tokens, &in_child, seed.expect("checked")),
        Variant::EverythingRandom => assign_everything_random(n, &child_tokens, seed.expect("checked")),
        Variant::Levenshtein => levenshtein::assign(parent, &child_tokens, &in_child),
    };

    // Slots without a child token keep a parent token absent from the child
    // vocabulary: their own if possible, otherwise the next unused one.
    let mut retained: Vec<Option<&str>> = vec![None; n];
    let mut used: HashSet<&str> = HashSet::new();
    for (slot, a) in assigned.iter().enumerate() {
        let own = parent.token(slot as u32).expect("slot in range");
        if a.is_none() && !in_child.contains(own) {
            retained[slot] = Some(own);
            used.insert(own);
        }
    }
    let mut spare = parent.iter().filter(|t| !in_child.contains(t) && !used.contains(t));
    for slot in 0..n {
        if assigned[slot].is_none() && retained[slot].is_none() {
            retained[slot] = Some(spare.next().expect("enough parent tokens outside the child vocabulary"));
        }
    }

    let entries = (0..n)
        .map(|slot| {
            let parent_token = parent.token(slot as u32).expect("slot in range").to_string();
            match assigned[slot] {
                Some(c) => {
                    let child_token = child_tokens[c].clone();
                    MappingEntry {
                        slot,
                        shared: child_token == parent_token,
                        token: child_token.clone(),
                        child_token: Some(child_token),
                        parent_token,
                    }
                }
                None => MappingEntry {
                    slot,
                    parent_token,
                    child_token: None,
                    token: retained[slot].expect("filled above").to_string(),
                    shared: false,
                },
            }
        })
        .collect();
    Ok(VocabMapping {
        entries,
        variant,
        seed: if variant.is_random() { seed } else { None },
    })
}

fn shared_slots(
    parent: &Vocabulary,
    in_child: &HashSet<&str>,
    assigned: &mut [Option<usize>],
    child_tokens: &[String],
) {
    for (c, t) in child_tokens.iter().enumerate() {
        if let Some(slot) = parent.id(t) {
            assigned[slot as usize] = Some(c);
        }
    }
    debug_assert!(assigned
        .iter()
        .flatten()
        .all(|&c| in_child.contains(child_tokens[c].as_str())));
}

fn assign_frequency(parent: &Vocabulary, child_tokens: &[String], in_child: &HashSet<&str>) -> Vec<Option<usize>> {
    let mut assigned = vec![None; parent.len()];
    shared_slots(parent, in_child, &mut assigned, child_tokens);
    let mut unused = (0..child_tokens.len()).filter(|&c| !parent.contains(&child_tokens[c]));
    for slot in assigned.iter_mut().filter(|a| a.is_none()) {
        match unused.next() {
            Some(c) => *slot = Some(c),
            None => break,
        }
    }
    assigned
}

fn assign_unmatched_random(
    parent: &Vocabulary,
    child_tokens: &[String],
    in_child: &HashSet<&str>,
    seed: u64,
) -> Vec<Option<usize>> {
    let mut assigned = vec![None; parent.len()];
    shared_slots(parent, in_child, &mut assigned, child_tokens);
    let mut free: Vec<usize> = (0..parent.len()).filter(|&s| assigned[s].is_none()).collect();
    rng::fisher_yates(&mut free, &mut rng::seeded(seed));
    let unused = (0..child_tokens.len()).filter(|&c| !parent.contains(&child_tokens[c]));
    for (slot, c) in free.into_iter().zip(unused) {
        assigned[slot] = Some(c);
    }
    assigned
}

fn assign_everything_random(n: usize, child_tokens: &[String], seed: u64) -> Vec<Option<usize>> {
    let mut slots: Vec<usize> = (0..n).collect();
    rng::fisher_yates(&mut slots, &mut rng::seeded(seed));
    let mut assigned = vec![None; n];
    for (c, &slot) in slots.iter().take(child_tokens.len()).enumerate() {
        assigned[slot] = Some(c);
    }
    assigned
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(tokens: &[&str]) -> Vocabulary {
        Vocabulary::from_tokens(tokens.iter().copied()).unwrap()
    }

    #[test]
    fn frequency_toy_example() {
        let m = remap_vocab(
            &v(&["a", "b", "c", "d"]),
            &v(&["b", "x", "a", "y"]),
            Variant::Frequency,
            None,
        )
        .unwrap();
        assert_eq!(m.vocabulary().tokens(), ["a", "b", "x", "y"]);
        let shared: Vec<bool> = m.entries.iter().map(|e| e.shared).collect();
        assert_eq!(shared, [true, true, false, false]);
        assert_eq!(
            m.to_tsv(),
            "slot\tparent\tchild\tshared\n0\ta\ta\ttrue\n1\tb\tb\ttrue\n2\tc\tx\tfalse\n3\td\ty\tfalse\n"
        );
    }

    #[test]
    fn identical_vocabularies_map_to_identity() {
        let p = v(&["the_", "a", "b", "ing"]);
        for variant in [Variant::Frequency, Variant::Levenshtein, Variant::UnmatchedRandom] {
            let m = remap_vocab(&p, &p, variant, Some(3)).unwrap();
            assert_eq!(m.vocabulary(), p);
            assert_eq!(m.shared_count(), 4);
        }
    }

    #[test]
    fn disjoint_vocabularies() {
        let m = remap_vocab(&v(&["aa", "bb"]), &v(&["xx", "yy"]), Variant::Frequency, None).unwrap();
        assert_eq!(m.vocabulary().tokens(), ["xx", "yy"]);
        assert_eq!(m.shared_count(), 0);
    }

    #[test]
    fn random_variants_need_a_seed() {
        let p = v(&["a"]);
        assert!(remap_vocab(&p, &p, Variant::UnmatchedRandom, None).is_err());
        assert!(remap_vocab(&p, &p, Variant::EverythingRandom, None).is_err());
    }

    #[test]
    fn smaller_child_keeps_parent_tokens() {
        let p = v(&["a", "b", "c", "d"]);
        let c = v(&["d", "x"]);
        for variant in Variant::ALL {
            let m = remap_vocab(&p, &c, variant, Some(9)).unwrap();
            let out = m.vocabulary();
            assert_eq!(out.len(), 4);
            assert!(out.contains("d") && out.contains("x"));
            assert_eq!(m.fallback_count(), 2);
            if variant.preserves_shared() {
                assert_eq!(out.id("d"), Some(3));
            }
        }
        let m = remap_vocab(&p, &c, Variant::Frequency, None).unwrap();
        assert_eq!(m.vocabulary().tokens(), ["x", "b", "c", "d"]);
        assert!(m.entries[1].is_fallback() && !m.entries[1].shared);
    }

    #[test]
    fn larger_child_is_truncated() {
        let m = remap_vocab(&v(&["a", "b"]), &v(&["b", "xy", "zw", "a"]), Variant::Frequency, None).unwrap();
        assert_eq!(m.vocabulary().tokens(), ["a", "b"]);
    }

    #[test]
    fn levenshtein_pairs_close_tokens() {
        let p = v(&["cat", "dog", "the", "zzzz"]);
        let c = v(&["dot", "the", "cap", "q"]);
        let m = remap_vocab(&p, &c, Variant::Levenshtein, None).unwrap();
        assert_eq!(m.vocabulary().tokens(), ["cap", "dot", "the", "q"]);
    }

    #[test]
    fn variant_names_roundtrip() {
        for variant in Variant::ALL {
            assert_eq!(variant.name().parse::<Variant>().unwrap(), variant);
        }
        assert_eq!(
            "everything-random".parse::<Variant>().unwrap(),
            Variant::EverythingRandom
        );
        assert!("nope".parse::<Variant>().is_err());
    }

    #[test]
    fn transform_learns_child_of_parent_size() {
        let parent = Vocabulary::with_printable_ascii(["the_", "and_", "of_"]).unwrap();
        let lines: Vec<String> = (0..40).map(|i| format!("ahoj svete {} a dalsi slova", i % 5)).collect();
        let child = Corpus::from_lines(lines).unwrap();
        let (out, m) = transform_vocab(&parent, &child, Variant::Frequency, None).unwrap();
        assert_eq!(out.len(), parent.len());
        assert_eq!(m.len(), parent.len());
        assert_eq!(out.id("a"), parent.id("a"));
    }
}
