use std::collections::HashMap;
use std::fs;
use std::path::Path;

use crate::{Error, Result};

pub const WORD_END: char = '_';
pub const ESCAPE_START: char = '\\';
pub const ESCAPE_END: char = ';';

/// Single-character tokens every escapable vocabulary must contain.
pub const RESERVED_TOKENS: [&str; 13] = ["\\", ";", "_", "0", "1", "2", "3", "4", "5", "6", "7", "8", "9"];

/// An ordered list of unique subword tokens. A token's index identifies
/// its embedding row and never changes once the vocabulary is built.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Vocabulary {
    tokens: Vec<String>,
    index: HashMap<String, u32>,
    max_token_chars: usize,
}

impl Vocabulary {
    pub fn new(tokens: Vec<String>) -> Result<Self> {
        let mut index = HashMap::with_capacity(tokens.len());
        let mut max_token_chars = 0;
        for (i, t) in tokens.iter().enumerate() {
            if t.is_empty() {
                return Err(Error::InvalidVocabulary(format!("empty token at index {i}")));
            }
            if t.contains('\n') {
                return Err(Error::InvalidVocabulary(format!(
                    "token at index {i} contains a line feed"
                )));
            }
            if index.insert(t.clone(), i as u32).is_some() {
                return Err(Error::InvalidVocabulary(format!("duplicate token `{t}`")));
            }
            max_token_chars = max_token_chars.max(t.chars().count());
        }
        Ok(Vocabulary {
            tokens,
            index,
            max_token_chars,
        })
    }

    pub fn from_tokens<I, S>(tokens: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Vocabulary::new(tokens.into_iter().map(Into::into).collect())
    }

    /// `tokens` followed by every printable ASCII character not already
    /// listed. Handy for toy vocabularies.
    pub fn with_printable_ascii<I, S>(tokens: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut all: Vec<String> = tokens.into_iter().map(Into::into).collect();
        for b in 0x21u8..=0x7e {
            let s = (b as char).to_string();
            if !all.contains(&s) {
                all.push(s);
            }
        }
        Vocabulary::new(all)
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn id(&self, token: &str) -> Option<u32> {
        self.index.get(token).copied()
    }

    pub fn token(&self, id: u32) -> Option<&str> {
        self.tokens.get(id as usize).map(String::as_str)
    }

    pub fn contains(&self, token: &str) -> bool {
        self.index.contains_key(token)
    }

    pub fn max_token_chars(&self) -> usize {
        self.max_token_chars
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.tokens.iter().map(String::as_str)
    }

    /// Reserved escape tokens absent from this vocabulary. Segmentation
    /// still succeeds without them, but those pieces get no id.
    pub fn missing_reserved(&self) -> Vec<&'static str> {
        RESERVED_TOKENS.iter().copied().filter(|t| !self.contains(t)).collect()
    }

    /// Drops multi-character tokens from the end until at most `max`
    /// tokens remain. Single characters are never dropped, so the result
    /// can exceed `max` when the alphabet alone is larger.
    pub fn truncate(&self, max: usize) -> Vocabulary {
        let mut excess = self.len().saturating_sub(max);
        let mut keep = vec![true; self.len()];
        for (i, t) in self.tokens.iter().enumerate().rev() {
            if excess == 0 {
                break;
            }
            if t.chars().nth(1).is_some() {
                keep[i] = false;
                excess -= 1;
            }
        }
        let tokens = self
            .tokens
            .iter()
            .zip(keep)
            .filter(|(_, k)| *k)
            .map(|(t, _)| t.clone())
            .collect();
        Vocabulary::new(tokens).expect("subset of a valid vocabulary")
    }

    /// One token per line; line number (from 0) is the token id.
    pub fn parse(text: &str) -> Result<Self> {
        if text.is_empty() {
            return Vocabulary::new(Vec::new());
        }
        let body = text.strip_suffix('\n').unwrap_or(text);
        Vocabulary::new(body.split('\n').map(str::to_string).collect())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Vocabulary::parse(&text)
    }

    pub fn to_file_string(&self) -> String {
        let mut s = String::new();
        for t in &self.tokens {
            s.push_str(t);
            s.push('\n');
        }
        s
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_file_string()).map_err(|e| Error::io(path, e))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_duplicates_and_empty() {
        assert!(Vocabulary::from_tokens(["a", "a"]).is_err());
        assert!(Vocabulary::from_tokens(["a", ""]).is_err());
        assert!(Vocabulary::from_tokens(["a\nb"]).is_err());
    }

    #[test]
    fn file_roundtrip_keeps_indices() {
        let v = Vocabulary::from_tokens(["doma_", " ", "a b", "ž"]).unwrap();
        let text = v.to_file_string();
        let w = Vocabulary::parse(&text).unwrap();
        assert_eq!(v, w);
        assert_eq!(w.id("a b"), Some(2));
        assert_eq!(Vocabulary::parse("").unwrap().len(), 0);
    }

    #[test]
    fn printable_ascii_has_reserved() {
        let v = Vocabulary::with_printable_ascii(["bude"]).unwrap();
        assert!(v.missing_reserved().is_empty());
        assert_eq!(v.id("bude"), Some(0));
        assert_eq!(v.len(), 1 + 94);
    }

    #[test]
    fn truncate_keeps_single_chars() {
        let v = Vocabulary::from_tokens(["ab", "a", "abc", "b", "bc"]).unwrap();
        let t = v.truncate(3);
        assert_eq!(t.tokens(), ["ab", "a", "b"]);
        let t = v.truncate(1);
        assert_eq!(t.tokens(), ["a", "b"]);
    }
}
