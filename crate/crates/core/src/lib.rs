//! Corpus and subword-vocabulary engineering for transfer learning in
//! neural machine translation.
//!
//! The crate is organised by task:
//!
//! * [`corpus`]: loading, filtering, sampling, mixing and corrupting corpora.
//! * [`bpe`]: byte-pair-encoding merge tables and substring enumeration.
//! * [`wordpiece`]: wordpiece vocabularies with size tolerance and byte escaping.
//! * [`transfer`]: cold-start transformation of a parent vocabulary for a child.
//! * [`sharedvocab`]: warm-start merged and balanced vocabularies.
//! * [`diagnostics`]: segmentation rate, vocabulary usage and overlap reports.
//! * [`eval`]: BLEU, paired bootstrap resampling, stopping criterion and
//!   output token analysis.
//!
//! Every stochastic operation takes an explicit seed and is bit-reproducible.

pub mod bpe;
pub mod corpus;
pub mod diagnostics;
mod error;
pub mod eval;
pub mod rng;
pub mod sharedvocab;
pub mod synthetic;
pub mod transfer;
pub mod tsv;
pub mod wordpiece;

pub use bpe::{apply_bpe, enumerate_substrings, learn_bpe, MergeRule, MergeTable};
pub use corpus::{Corpus, FilterReport, ParallelCorpus, Sentence, SentencePair};
pub use error::{Error, Result};
pub use eval::{BleuConfig, BleuReport, LearningCurve, SignificanceResult};
pub use transfer::{MappingEntry, Variant, VocabMapping};
pub use wordpiece::{apply_wordpiece, detokenize, learn_wordpiece, VocabSpec, Vocabulary};

/// Format version written into merge files, manifests and BLEU signatures.
pub const FORMAT_VERSION: &str = "xfervocab-1";
