//! Translation evaluation: corpus BLEU, paired bootstrap resampling, the
//! early-stopping rule and an output token overlap breakdown.

mod bleu;
mod bootstrap;
mod overlap;
mod stopping;
mod tokenize;

pub use bleu::{
    bleu, brevity_penalty, corpus_bleu, corpus_stats, score_stats, sentence_stats, sum_stats, BleuConfig, BleuReport,
    BleuStats, Smoothing,
};
pub use bootstrap::{bootstrap_stats, paired_bootstrap, Better, BootstrapConfig, SignificanceResult};
pub use overlap::{token_overlap_analysis, TokenOverlap};
pub use stopping::{should_stop, should_stop_at, DeltaBase, LearningCurve, StopDecision, StopRule};
pub use tokenize::Tokenize;
