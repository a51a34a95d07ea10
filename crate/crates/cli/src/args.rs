use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "xfervocab",
    version,
    about = "Subword vocabularies and corpora for transfer learning in NMT"
)]
pub struct Cli {
    /// key=value file; each key is a long flag name used when the flag is
    /// not given on the command line.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    /// Where to write the run manifest. Defaults to `<first output>.manifest.json`.
    #[arg(long, global = true, value_name = "FILE")]
    pub manifest: Option<PathBuf>,

    /// Do not write a run manifest.
    #[arg(long, global = true)]
    pub no_manifest: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Learn a BPE merge table from one or more corpora (joint).
    LearnBpe(LearnBpeArgs),
    /// Segment a corpus with a BPE merge table.
    ApplyBpe(ApplyBpeArgs),
    /// Learn a wordpiece vocabulary.
    LearnWp(LearnWpArgs),
    /// Segment a corpus with a wordpiece vocabulary.
    ApplyWp(ApplyWpArgs),
    /// Rewrite a parent vocabulary to hold child subwords.
    TransformVocab(TransformArgs),
    /// Merge two vocabularies, or build a merged vocabulary of a target size from two corpora.
    MergeVocab(MergeArgs),
    /// Learn a vocabulary from equally sized samples of several corpora.
    BalancedVocab(BalancedArgs),
    /// Vocabulary and segmentation diagnostics.
    #[command(subcommand)]
    Diag(DiagCommand),
    /// Corpus preparation.
    #[command(subcommand)]
    Corpus(CorpusCommand),
    /// Evaluation statistics.
    #[command(subcommand)]
    Eval(EvalCommand),
    /// Re-run a recorded manifest and compare output digests.
    Replay(ReplayArgs),
}

#[derive(Debug, Args)]
pub struct VocabSpecArgs {
    #[arg(long, default_value_t = 32_000)]
    pub target_size: usize,
    /// Allowed relative deviation from the target size.
    #[arg(long, default_value_t = 0.01)]
    pub tolerance: f64,
    /// Sentences read for learning.
    #[arg(long, default_value_t = 20_000_000)]
    pub max_sentences: usize,
    /// Refinement passes per threshold.
    #[arg(long, default_value_t = 4)]
    pub iterations: usize,
}

#[derive(Debug, Args)]
pub struct ParallelInput {
    #[arg(long, requires = "target", conflicts_with = "tsv")]
    pub source: Option<PathBuf>,
    #[arg(long, requires = "source")]
    pub target: Option<PathBuf>,
    /// Two-column TSV instead of two aligned files.
    #[arg(long)]
    pub tsv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ParallelOutput {
    #[arg(long, requires = "out_target", conflicts_with = "out_tsv")]
    pub out_source: Option<PathBuf>,
    #[arg(long, requires = "out_source")]
    pub out_target: Option<PathBuf>,
    #[arg(long)]
    pub out_tsv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct LearnBpeArgs {
    #[arg(long, num_args = 1.., required = true)]
    pub input: Vec<PathBuf>,
    #[arg(long)]
    pub merges: usize,
    #[arg(long, short)]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct ApplyBpeArgs {
    #[arg(long)]
    pub merges: PathBuf,
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, short)]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct LearnWpArgs {
    #[arg(long, num_args = 1.., required = true)]
    pub input: Vec<PathBuf>,
    #[command(flatten)]
    pub spec: VocabSpecArgs,
    #[arg(long, short)]
    pub output: PathBuf,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum WpFormat {
    /// Tokens separated by spaces; whitespace inside a token is escaped.
    Tokens,
    /// Vocabulary ids; pieces missing from the vocabulary are written as -1.
    Ids,
}

#[derive(Debug, Args)]
pub struct ApplyWpArgs {
    #[arg(long)]
    pub vocab: PathBuf,
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, short)]
    pub output: PathBuf,
    #[arg(long, value_enum, default_value_t = WpFormat::Tokens)]
    pub format: WpFormat,
}

#[derive(Debug, Args)]
pub struct TransformArgs {
    #[arg(long)]
    pub parent_vocab: PathBuf,
    /// Child training corpus; used to learn the child vocabulary and for the unused-parent report.
    #[arg(long)]
    pub child_corpus: PathBuf,
    /// Use this child vocabulary instead of learning one.
    #[arg(long)]
    pub child_vocab: Option<PathBuf>,
    /// frequency, everything_random, unmatched_random or levenshtein.
    #[arg(long, default_value = "frequency")]
    pub variant: String,
    /// Required for the random variants.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Parent embedding matrix (`.bin` for binary, otherwise TSV).
    #[arg(long)]
    pub embeddings: Option<PathBuf>,
    #[arg(long, default_value_t = 0.01)]
    pub tolerance: f64,
    #[arg(long, default_value_t = 20_000_000)]
    pub max_sentences: usize,
    #[arg(long, default_value_t = 4)]
    pub iterations: usize,
    #[arg(long)]
    pub out_dir: PathBuf,
}

#[derive(Debug, Args)]
pub struct MergeArgs {
    #[arg(long, requires = "child_vocab", conflicts_with_all = ["parent_corpus", "child_corpus"])]
    pub parent_vocab: Option<PathBuf>,
    #[arg(long, requires = "parent_vocab")]
    pub child_vocab: Option<PathBuf>,
    #[arg(long, requires = "child_corpus")]
    pub parent_corpus: Option<PathBuf>,
    #[arg(long, requires = "parent_corpus")]
    pub child_corpus: Option<PathBuf>,
    #[command(flatten)]
    pub spec: VocabSpecArgs,
    #[arg(long, short)]
    pub output: PathBuf,
    /// Build report TSV (corpus mode only).
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BalancedArgs {
    /// Corpus files; each contributes the same number of sentences.
    #[arg(long, num_args = 1.., required = true)]
    pub input: Vec<PathBuf>,
    #[command(flatten)]
    pub spec: VocabSpecArgs,
    #[arg(long)]
    pub seed: u64,
    #[arg(long, short)]
    pub output: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum DiagCommand {
    /// Wordpiece tokens per whitespace word.
    Rate(RateArgs),
    /// Share of vocabulary tokens occurring in a corpus.
    Usage(UsageArgs),
    /// Split the vocabulary by the languages each token occurs in.
    Overlap(OverlapArgs),
    /// Share of pairs a subword-length filter would drop.
    FilterImpact(FilterImpactArgs),
}

#[derive(Debug, Args)]
pub struct RateArgs {
    #[arg(long)]
    pub vocab: PathBuf,
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct UsageArgs {
    #[arg(long)]
    pub vocab: PathBuf,
    #[arg(long)]
    pub input: PathBuf,
    /// Only count tokens with a character in these ranges, e.g. `0400-04FF` or `cyrillic`.
    #[arg(long)]
    pub char_class: Option<String>,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OverlapArgs {
    #[arg(long)]
    pub vocab: PathBuf,
    /// `LABEL:ROLE=PATH`, ROLE one of parent, child, both. Repeat per corpus.
    #[arg(long = "corpus", required = true, num_args = 1..)]
    pub corpora: Vec<String>,
    #[arg(long, default_value_t = 10)]
    pub min_count: u64,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FilterImpactArgs {
    #[arg(long)]
    pub vocab: PathBuf,
    #[command(flatten)]
    pub input: ParallelInput,
    #[arg(long, default_value_t = 100)]
    pub max_tokens: usize,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum CorpusCommand {
    /// Drop pairs by word or subword length.
    Filter(FilterArgs),
    /// Draw the same number of sentences from each file.
    Sample(SampleArgs),
    /// Oversample authentic data, append synthetic data and shuffle.
    Mix(MixArgs),
    /// Build a pseudo-related language with a letter cipher.
    Pseudo(PseudoArgs),
    /// Damage word order or sentence pairing.
    Corrupt(CorruptArgs),
}

#[derive(Debug, Args)]
pub struct FilterArgs {
    #[command(flatten)]
    pub input: ParallelInput,
    #[command(flatten)]
    pub output: ParallelOutput,
    /// Keep pairs whose sides have more than this many words.
    #[arg(long, default_value_t = 0)]
    pub min_words: usize,
    /// Keep pairs whose sides have at most this many words.
    #[arg(long)]
    pub max_words: Option<usize>,
    /// Vocabulary for subword-length filtering.
    #[arg(long, requires = "max_subwords")]
    pub vocab: Option<PathBuf>,
    #[arg(long, requires = "vocab")]
    pub max_subwords: Option<usize>,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[arg(long, num_args = 1.., required = true)]
    pub input: Vec<PathBuf>,
    /// Sentences per file; defaults to the size of the smallest file.
    #[arg(long)]
    pub per_side: Option<usize>,
    #[arg(long)]
    pub seed: u64,
    #[arg(long, short)]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct MixArgs {
    #[arg(long)]
    pub auth_source: PathBuf,
    #[arg(long)]
    pub auth_target: PathBuf,
    #[arg(long)]
    pub synth_source: PathBuf,
    #[arg(long)]
    pub synth_target: PathBuf,
    #[arg(long, default_value_t = 1)]
    pub factor: usize,
    #[arg(long)]
    pub seed: u64,
    #[command(flatten)]
    pub output: ParallelOutput,
}

#[derive(Debug, Args)]
pub struct PseudoArgs {
    #[command(flatten)]
    pub input: ParallelInput,
    #[command(flatten)]
    pub output: ParallelOutput,
    /// Fraction of word types left unchanged.
    #[arg(long)]
    pub keep: f64,
    #[arg(long)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct CorruptArgs {
    #[command(flatten)]
    pub input: ParallelInput,
    #[command(flatten)]
    pub output: ParallelOutput,
    /// shuffle_source, shuffle_target, shuffle_both, sort_target or shuffle_pairing.
    #[arg(long)]
    pub mode: String,
    #[arg(long)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct BleuArgs {
    #[arg(long, default_value = "13a")]
    pub tokenize: String,
    #[arg(long, default_value = "exp")]
    pub smooth: String,
    #[arg(long, default_value_t = 4)]
    pub max_order: usize,
    #[arg(long)]
    pub lowercase: bool,
    /// Average over all orders even when a corpus has no n-grams of some order.
    #[arg(long)]
    pub no_effective_order: bool,
}

#[derive(Debug, Subcommand)]
pub enum EvalCommand {
    /// Corpus BLEU.
    Bleu(EvalBleuArgs),
    /// Paired bootstrap resampling of two systems.
    Bootstrap(BootstrapArgs),
    /// Apply the stopping rule to a learning curve.
    Stop(StopArgs),
    /// Classify child output tokens against a baseline and the reference.
    TokenAnalysis(TokenAnalysisArgs),
}

#[derive(Debug, Args)]
pub struct EvalBleuArgs {
    #[arg(long)]
    pub hyp: PathBuf,
    #[arg(long = "ref", num_args = 1.., required = true)]
    pub refs: Vec<PathBuf>,
    #[command(flatten)]
    pub bleu: BleuArgs,
    /// Print only the score.
    #[arg(long)]
    pub score_only: bool,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BootstrapArgs {
    #[arg(long)]
    pub hyp_a: PathBuf,
    #[arg(long)]
    pub hyp_b: PathBuf,
    #[arg(long = "ref")]
    pub reference: PathBuf,
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    #[arg(long)]
    pub seed: u64,
    #[command(flatten)]
    pub bleu: BleuArgs,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct StopArgs {
    /// `step<TAB>score` lines.
    #[arg(long)]
    pub curve: PathBuf,
    #[arg(long, default_value_t = 0.5)]
    pub window_frac: f64,
    #[arg(long, default_value_t = 0.005)]
    pub delta_frac: f64,
    #[arg(long, default_value_t = 4)]
    pub min_evals: usize,
    /// global_max or pre_window_max.
    #[arg(long, default_value = "global_max")]
    pub delta_base: String,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TokenAnalysisArgs {
    #[arg(long)]
    pub child: PathBuf,
    #[arg(long)]
    pub baseline: PathBuf,
    #[arg(long = "ref")]
    pub reference: PathBuf,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReplayArgs {
    pub manifest: PathBuf,
}
