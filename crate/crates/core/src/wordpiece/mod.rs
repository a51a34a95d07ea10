//! Wordpiece vocabularies.
//!
//! Text is first split into *units* at every change between alphanumeric
//! and other characters (a single space between two alphanumeric units is
//! implied and dropped), so `doma.` becomes `doma` and `.`. Each unit gets
//! the word-end marker `_` appended and is segmented greedily, always
//! taking the longest vocabulary token that prefixes the rest of the unit.
//! A character with no matching token, and any literal `_` or `\`, is
//! escaped as the tokens `\`, its decimal code point digits, and `;`.
//!
//! When the marker is not part of a longer token it is rendered attached to
//! the unit's last token, so `budeme` under a vocabulary holding `bud` and
//! `me` renders as `bud e me_`.

mod learn;
mod segment;
mod vocab;

pub use learn::{learn_wordpiece, VocabSpec, WordpieceBuild, WordpieceTrainer};
pub use segment::{apply_wordpiece, detokenize, display_token, join_units, split_units, Piece, PieceKind};
pub use vocab::{Vocabulary, ESCAPE_END, ESCAPE_START, RESERVED_TOKENS, WORD_END};
