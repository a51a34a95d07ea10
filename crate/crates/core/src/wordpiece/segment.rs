use super::vocab::{Vocabulary, ESCAPE_END, ESCAPE_START, WORD_END};
use crate::{Error, Result};

const DIGITS: [&str; 10] = ["0", "1", "2", "3", "4", "5", "6", "7", "8", "9"];
const ESCAPE_START_STR: &str = "\\";
const ESCAPE_END_STR: &str = ";";
const WORD_END_STR: &str = "_";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PieceKind {
    /// A vocabulary token matched against the text.
    Token,
    /// One character of a `\<code point>;` escape sequence.
    Escape,
    /// The word-end marker on its own, when no token absorbed it.
    WordEnd,
}

/// One segmentation step. `id` is `None` only for escape or marker
/// characters missing from the vocabulary.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Piece<'a> {
    pub text: &'a str,
    pub id: Option<u32>,
    pub kind: PieceKind,
}

fn is_unit_char(c: char) -> bool {
    c.is_alphanumeric()
}

fn is_forced_escape(c: char) -> bool {
    c == WORD_END || c == ESCAPE_START
}

/// Splits text into runs of alphanumeric and non-alphanumeric characters.
/// A run that is exactly one space, not at the start, is dropped: it can
/// only sit between two alphanumeric runs and [`join_units`] restores it.
pub fn split_units(text: &str) -> Vec<&str> {
    let mut units = Vec::new();
    let mut chars = text.char_indices();
    let Some((_, first)) = chars.next() else {
        return units;
    };
    let mut start = 0;
    let mut prev = is_unit_char(first);
    for (pos, c) in chars {
        let cur = is_unit_char(c);
        if cur != prev {
            let unit = &text[start..pos];
            if unit != " " || start == 0 {
                units.push(unit);
            }
            start = pos;
            prev = cur;
        }
    }
    units.push(&text[start..]);
    units
}

/// Inverse of [`split_units`].
pub fn join_units<S: AsRef<str>>(units: &[S]) -> String {
    let alnum = |u: &str| u.chars().next().is_some_and(is_unit_char);
    let mut out = String::new();
    for (i, u) in units.iter().enumerate() {
        let u = u.as_ref();
        if i > 0 && alnum(units[i - 1].as_ref()) && alnum(u) {
            out.push(' ');
        }
        out.push_str(u);
    }
    out
}

impl Vocabulary {
    fn reserved_piece(&self, text: &'static str, kind: PieceKind) -> Piece<'static> {
        Piece {
            text,
            id: self.id(text),
            kind,
        }
    }

    fn push_escape<'a>(&'a self, c: char, out: &mut Vec<Piece<'a>>) {
        out.push(self.reserved_piece(ESCAPE_START_STR, PieceKind::Escape));
        for d in (c as u32).to_string().bytes() {
            out.push(self.reserved_piece(DIGITS[(d - b'0') as usize], PieceKind::Escape));
        }
        out.push(self.reserved_piece(ESCAPE_END_STR, PieceKind::Escape));
    }

    fn segment_unit<'a>(&'a self, unit: &str, out: &mut Vec<Piece<'a>>) {
        let chars: Vec<(usize, char)> = unit.char_indices().collect();
        let n = chars.len();
        let mut buf = String::new();
        let mut bounds: Vec<usize> = Vec::new();
        let mut i = 0;
        let mut marker_consumed = false;
        while i < n {
            let c = chars[i].1;
            if is_forced_escape(c) {
                self.push_escape(c, out);
                i += 1;
                continue;
            }
            let mut j = i;
            while j < n && !is_forced_escape(chars[j].1) {
                j += 1;
            }
            let at_end = j == n;
            let avail = (j - i) + usize::from(at_end);
            let take = avail.min(self.max_token_chars());

            buf.clear();
            bounds.clear();
            for &(_, ch) in &chars[i..j] {
                if bounds.len() == take {
                    break;
                }
                bounds.push(buf.len());
                buf.push(ch);
            }
            if at_end && bounds.len() < take {
                bounds.push(buf.len());
                buf.push(WORD_END);
            }
            bounds.push(buf.len());

            let found = (1..=take)
                .rev()
                .find_map(|len| self.id(&buf[..bounds[len]]).map(|id| (len, id)));
            match found {
                Some((len, id)) => {
                    out.push(Piece {
                        text: self.token(id).expect("id from this vocabulary"),
                        id: Some(id),
                        kind: PieceKind::Token,
                    });
                    if at_end && len == avail {
                        marker_consumed = true;
                        i = n;
                    } else {
                        i += len;
                    }
                }
                None => {
                    self.push_escape(c, out);
                    i += 1;
                }
            }
        }
        if !marker_consumed {
            out.push(self.reserved_piece(WORD_END_STR, PieceKind::WordEnd));
        }
    }

    /// Segmentation pieces of a whole sentence.
    pub fn pieces<'a>(&'a self, sentence: &str) -> Vec<Piece<'a>> {
        let mut out = Vec::new();
        for unit in split_units(sentence) {
            self.segment_unit(unit, &mut out);
        }
        out
    }

    /// Number of rendered tokens [`apply_wordpiece`] would produce.
    pub fn token_count(&self, sentence: &str) -> usize {
        self.pieces(sentence)
            .iter()
            .filter(|p| p.kind != PieceKind::WordEnd)
            .count()
    }

    pub fn segment(&self, sentence: &str) -> Vec<String> {
        render(&self.pieces(sentence))
    }
}

fn render(pieces: &[Piece<'_>]) -> Vec<String> {
    let mut out: Vec<String> = Vec::with_capacity(pieces.len());
    for p in pieces {
        match (p.kind, out.last_mut()) {
            (PieceKind::WordEnd, Some(last)) => last.push(WORD_END),
            _ => out.push(p.text.to_string()),
        }
    }
    out
}

/// Segments a sentence into wordpiece tokens.
pub fn apply_wordpiece(vocab: &Vocabulary, sentence: &str) -> Vec<String> {
    vocab.segment(sentence)
}

/// Renders whitespace inside a token as an escape so tokens can be written
/// space-separated. [`detokenize`] decodes the result unchanged.
pub fn display_token(token: &str) -> String {
    let mut out = String::with_capacity(token.len());
    for c in token.chars() {
        if c.is_whitespace() {
            out.push(ESCAPE_START);
            out.push_str(&(c as u32).to_string());
            out.push(ESCAPE_END);
        } else {
            out.push(c);
        }
    }
    out
}

/// Inverse of [`apply_wordpiece`]: concatenates tokens, decodes escapes and
/// turns word-end markers back into unit boundaries.
pub fn detokenize<S: AsRef<str>>(tokens: &[S]) -> Result<String> {
    let text: String = tokens.iter().map(AsRef::as_ref).collect();
    let mut units: Vec<String> = Vec::new();
    let mut cur = String::new();
    let mut chars = text.char_indices().peekable();
    while let Some((offset, c)) = chars.next() {
        match c {
            ESCAPE_START => {
                let mut digits = String::new();
                while let Some(&(_, d)) = chars.peek() {
                    if !d.is_ascii_digit() {
                        break;
                    }
                    digits.push(d);
                    chars.next();
                }
                let malformed = |message: &str| Error::MalformedEscape {
                    offset,
                    message: message.to_string(),
                };
                if digits.is_empty() {
                    return Err(malformed("expected a decimal code point"));
                }
                if chars.next().map(|(_, c)| c) != Some(ESCAPE_END) {
                    return Err(malformed("missing `;`"));
                }
                let decoded = digits
                    .parse::<u32>()
                    .ok()
                    .and_then(char::from_u32)
                    .ok_or_else(|| malformed("not a Unicode scalar value"))?;
                cur.push(decoded);
            }
            WORD_END => units.push(std::mem::take(&mut cur)),
            c => cur.push(c),
        }
    }
    if !cur.is_empty() {
        units.push(cur);
    }
    Ok(join_units(&units))
}
