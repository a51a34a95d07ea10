use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use xfervocab::corpus::{
    corrupt_word_order, filter_by_subword_length, filter_by_word_length, load_parallel, load_parallel_tsv,
    make_pseudo_related, mix_with_oversample, read_lines, sample_equal_many, write_lines, Corruption,
};
use xfervocab::diagnostics::{
    length_filter_impact, overlap_breakdown, segmentation_rate, vocab_usage, CharClass, LabeledCorpus, Roles,
};
use xfervocab::eval::{
    corpus_bleu, paired_bootstrap, should_stop, token_overlap_analysis, BleuConfig, BootstrapConfig, DeltaBase,
    LearningCurve, Smoothing, StopRule, Tokenize,
};
use xfervocab::sharedvocab::{build_balanced_vocab, build_merged_vocab, merge_vocabs};
use xfervocab::transfer::{emit_transfer_bundle, remap_vocab, EmbeddingFormat, EmbeddingMatrix};
use xfervocab::wordpiece::{display_token, learn_wordpiece};
use xfervocab::{learn_bpe, Corpus, MergeTable, ParallelCorpus, Variant, VocabSpec, Vocabulary};

use crate::args::*;

/// What a command read and wrote, for the manifest.
#[derive(Debug, Default)]
pub struct Outcome {
    pub inputs: Vec<PathBuf>,
    pub outputs: Vec<PathBuf>,
    pub stdout: String,
    pub seed: Option<u64>,
}

impl Outcome {
    fn input(&mut self, p: &Path) -> Result<()> {
        if !p.is_file() {
            bail!("input {} does not exist", p.display());
        }
        self.inputs.push(p.to_path_buf());
        Ok(())
    }

    fn inputs<'a>(&mut self, ps: impl IntoIterator<Item = &'a PathBuf>) -> Result<()> {
        ps.into_iter().try_for_each(|p| self.input(p))
    }
}

/// Raised for flag combinations clap cannot express; reported as a usage error.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    anyhow::Error::new(UsageError(msg.into()))
}

pub fn run(cmd: Command) -> Result<Outcome> {
    let mut o = Outcome::default();
    match cmd {
        Command::LearnBpe(a) => learn_bpe_cmd(a, &mut o)?,
        Command::ApplyBpe(a) => apply_bpe_cmd(a, &mut o)?,
        Command::LearnWp(a) => learn_wp(a, &mut o)?,
        Command::ApplyWp(a) => apply_wp(a, &mut o)?,
        Command::TransformVocab(a) => transform(a, &mut o)?,
        Command::MergeVocab(a) => merge(a, &mut o)?,
        Command::BalancedVocab(a) => balanced(a, &mut o)?,
        Command::Diag(d) => match d {
            DiagCommand::Rate(a) => diag_rate(a, &mut o)?,
            DiagCommand::Usage(a) => diag_usage(a, &mut o)?,
            DiagCommand::Overlap(a) => diag_overlap(a, &mut o)?,
            DiagCommand::FilterImpact(a) => diag_filter_impact(a, &mut o)?,
        },
        Command::Corpus(c) => match c {
            CorpusCommand::Filter(a) => corpus_filter(a, &mut o)?,
            CorpusCommand::Sample(a) => corpus_sample(a, &mut o)?,
            CorpusCommand::Mix(a) => corpus_mix(a, &mut o)?,
            CorpusCommand::Pseudo(a) => corpus_pseudo(a, &mut o)?,
            CorpusCommand::Corrupt(a) => corpus_corrupt(a, &mut o)?,
        },
        Command::Eval(e) => match e {
            EvalCommand::Bleu(a) => eval_bleu(a, &mut o)?,
            EvalCommand::Bootstrap(a) => eval_bootstrap(a, &mut o)?,
            EvalCommand::Stop(a) => eval_stop(a, &mut o)?,
            EvalCommand::TokenAnalysis(a) => eval_token_analysis(a, &mut o)?,
        },
        Command::Replay(_) => unreachable!("replay is handled by the driver"),
    }
    Ok(o)
}

fn spec(a: &VocabSpecArgs) -> Result<VocabSpec> {
    let s = VocabSpec {
        target_size: a.target_size,
        tolerance: a.tolerance,
        max_train_sentences: a.max_sentences,
        num_iterations: a.iterations,
    };
    s.validate().map_err(|e| usage(e.to_string()))?;
    Ok(s)
}

fn load_corpus(p: &Path, o: &mut Outcome) -> Result<Corpus> {
    o.input(p)?;
    Ok(Corpus::load(p)?)
}

fn load_vocab(p: &Path, o: &mut Outcome) -> Result<Vocabulary> {
    o.input(p)?;
    Ok(Vocabulary::load(p)?)
}

fn load_lines(p: &Path, o: &mut Outcome) -> Result<Vec<String>> {
    o.input(p)?;
    Ok(read_lines(p)?.into_iter().map(|s| s.into_string()).collect())
}

fn load_pair(i: &ParallelInput, o: &mut Outcome) -> Result<ParallelCorpus> {
    match (&i.source, &i.target, &i.tsv) {
        (Some(s), Some(t), None) => {
            o.input(s)?;
            o.input(t)?;
            Ok(load_parallel(s, t)?)
        }
        (None, None, Some(p)) => {
            o.input(p)?;
            Ok(load_parallel_tsv(p)?)
        }
        _ => Err(usage("give either --source and --target or --tsv")),
    }
}

fn save_pair(c: &ParallelCorpus, out: &ParallelOutput, o: &mut Outcome) -> Result<()> {
    match (&out.out_source, &out.out_target, &out.out_tsv) {
        (Some(s), Some(t), None) => {
            c.save(s, t)?;
            o.outputs.extend([s.clone(), t.clone()]);
        }
        (None, None, Some(p)) => {
            c.save_tsv(p)?;
            o.outputs.push(p.clone());
        }
        _ => return Err(usage("give either --out-source and --out-target or --out-tsv")),
    }
    Ok(())
}

fn write_out(path: &Path, text: &str, o: &mut Outcome) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
    o.outputs.push(path.to_path_buf());
    Ok(())
}

fn maybe_write(path: &Option<PathBuf>, text: &str, o: &mut Outcome) -> Result<()> {
    match path {
        Some(p) => write_out(p, text, o),
        None => Ok(()),
    }
}

/// Left-aligned first column, right-aligned numbers.
fn table(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let width: Vec<usize> = (0..cols)
        .map(|c| {
            rows.iter()
                .filter_map(|r| r.get(c))
                .map(|s| s.chars().count())
                .max()
                .unwrap_or(0)
        })
        .collect();
    let mut s = String::new();
    for r in rows {
        let cells: Vec<String> = r
            .iter()
            .enumerate()
            .map(|(i, c)| {
                if i == 0 {
                    format!("{c:<w$}", w = width[i])
                } else {
                    format!("{c:>w$}", w = width[i])
                }
            })
            .collect();
        s.push_str(cells.join("  ").trim_end());
        s.push('\n');
    }
    s
}

/// Renders a TSV report as an aligned table.
fn tsv_table(tsv: &str) -> String {
    let rows: Vec<Vec<String>> = tsv
        .lines()
        .map(|l| l.split('\t').map(str::to_string).collect())
        .collect();
    table(&rows)
}

fn learn_bpe_cmd(a: LearnBpeArgs, o: &mut Outcome) -> Result<()> {
    let corpora = a.input.iter().map(|p| load_corpus(p, o)).collect::<Result<Vec<_>>>()?;
    let table = learn_bpe(&corpora, a.merges)?;
    table.save(&a.output)?;
    o.outputs.push(a.output);
    writeln!(o.stdout, "learned {} merges", table.len())?;
    Ok(())
}

fn apply_bpe_cmd(a: ApplyBpeArgs, o: &mut Outcome) -> Result<()> {
    o.input(&a.merges)?;
    let table = MergeTable::load(&a.merges)?;
    let lines = load_lines(&a.input, o)?;
    let out: Vec<String> = lines.iter().map(|l| table.apply_line(l)).collect();
    write_lines(&a.output, out.iter().map(String::as_str))?;
    o.outputs.push(a.output);
    Ok(())
}

fn learn_wp(a: LearnWpArgs, o: &mut Outcome) -> Result<()> {
    let spec = spec(&a.spec)?;
    let corpora = a.input.iter().map(|p| load_corpus(p, o)).collect::<Result<Vec<_>>>()?;
    let b = learn_wordpiece(&corpora, &spec)?;
    b.vocab.save(&a.output)?;
    o.outputs.push(a.output);
    let (lo, hi) = spec.bounds();
    writeln!(
        o.stdout,
        "vocabulary size {} (target {} in [{lo}, {hi}]), min count {}, {} builds{}",
        b.vocab.len(),
        spec.target_size,
        b.min_count,
        b.builds_tried,
        if b.trimmed { ", trimmed" } else { "" }
    )?;
    if !b.within_tolerance {
        log::warn!("vocabulary size {} is outside the tolerance", b.vocab.len());
    }
    Ok(())
}

fn apply_wp(a: ApplyWpArgs, o: &mut Outcome) -> Result<()> {
    let vocab = load_vocab(&a.vocab, o)?;
    let lines = load_lines(&a.input, o)?;
    let out: Vec<String> = lines
        .iter()
        .map(|l| {
            let toks = vocab.segment(l);
            match a.format {
                WpFormat::Tokens => toks.iter().map(|t| display_token(t)).collect::<Vec<_>>().join(" "),
                WpFormat::Ids => toks
                    .iter()
                    .map(|t| vocab.id(t).map_or_else(|| "-1".to_string(), |i| i.to_string()))
                    .collect::<Vec<_>>()
                    .join(" "),
            }
        })
        .collect();
    write_lines(&a.output, out.iter().map(String::as_str))?;
    o.outputs.push(a.output);
    Ok(())
}

fn transform(a: TransformArgs, o: &mut Outcome) -> Result<()> {
    let variant: Variant = a.variant.parse().map_err(|e: xfervocab::Error| usage(e.to_string()))?;
    if variant.is_random() && a.seed.is_none() {
        return Err(usage(format!("--variant {variant} requires --seed")));
    }
    o.seed = a.seed;
    let parent = load_vocab(&a.parent_vocab, o)?;
    let child_corpus = load_corpus(&a.child_corpus, o)?;
    let child = match &a.child_vocab {
        Some(p) => load_vocab(p, o)?,
        None => {
            let spec = VocabSpec {
                target_size: parent.len(),
                tolerance: a.tolerance,
                max_train_sentences: a.max_sentences,
                num_iterations: a.iterations,
            };
            spec.validate().map_err(|e| usage(e.to_string()))?;
            learn_wordpiece(std::slice::from_ref(&child_corpus), &spec)?.vocab
        }
    };
    let mapping = remap_vocab(&parent, &child, variant, a.seed)?;
    match &a.embeddings {
        Some(p) => {
            o.input(p)?;
            let format = EmbeddingFormat::from_path(p);
            let m = EmbeddingMatrix::load(p, format)?;
            let paths = emit_transfer_bundle(&mapping, &m, &child_corpus, &a.out_dir, format)?;
            o.outputs.extend(paths.all().iter().map(|p| p.to_path_buf()));
        }
        None => {
            fs::create_dir_all(&a.out_dir).with_context(|| format!("creating {}", a.out_dir.display()))?;
            let vocab = a.out_dir.join("vocab.txt");
            mapping.vocabulary().save(&vocab)?;
            o.outputs.push(vocab);
            write_out(&a.out_dir.join("mapping.tsv"), &mapping.to_tsv(), o)?;
        }
    }
    writeln!(
        o.stdout,
        "{}",
        table(&[
            vec!["variant".into(), variant.name().into()],
            vec!["slots".into(), mapping.len().to_string()],
            vec!["child tokens".into(), child.len().to_string()],
            vec!["shared".into(), mapping.shared_count().to_string()],
            vec!["fallback".into(), mapping.fallback_count().to_string()],
        ])
        .trim_end()
    )?;
    Ok(())
}

fn merge(a: MergeArgs, o: &mut Outcome) -> Result<()> {
    match (&a.parent_vocab, &a.child_vocab, &a.parent_corpus, &a.child_corpus) {
        (Some(pv), Some(cv), None, None) => {
            let p = load_vocab(pv, o)?;
            let c = load_vocab(cv, o)?;
            let m = merge_vocabs(&p, &c);
            m.save(&a.output)?;
            o.outputs.push(a.output.clone());
            writeln!(o.stdout, "merged {} + {} -> {} tokens", p.len(), c.len(), m.len())?;
        }
        (None, None, Some(pc), Some(cc)) => {
            let spec = spec(&a.spec)?;
            let p = load_corpus(pc, o)?;
            let c = load_corpus(cc, o)?;
            let (v, report) = build_merged_vocab(&p, &c, &spec)?;
            v.save(&a.output)?;
            o.outputs.push(a.output.clone());
            maybe_write(&a.report, &report.to_tsv(), o)?;
            o.stdout.push_str(&tsv_table(&report.to_tsv()));
        }
        _ => {
            return Err(usage(
                "give either --parent-vocab/--child-vocab or --parent-corpus/--child-corpus",
            ))
        }
    }
    Ok(())
}

fn balanced(a: BalancedArgs, o: &mut Outcome) -> Result<()> {
    let spec = spec(&a.spec)?;
    o.seed = Some(a.seed);
    let files = a.input.iter().map(|p| load_corpus(p, o)).collect::<Result<Vec<_>>>()?;
    let b = build_balanced_vocab(&files, &spec, a.seed)?;
    b.build.vocab.save(&a.output)?;
    o.outputs.push(a.output);
    writeln!(
        o.stdout,
        "vocabulary size {} from {} sentences per file",
        b.build.vocab.len(),
        b.per_side
    )?;
    Ok(())
}

fn diag_rate(a: RateArgs, o: &mut Outcome) -> Result<()> {
    let v = load_vocab(&a.vocab, o)?;
    let c = load_corpus(&a.input, o)?;
    let r = segmentation_rate(&v, &c)?;
    maybe_write(&a.output, &r.to_tsv(), o)?;
    o.stdout.push_str(&tsv_table(&r.to_tsv()));
    Ok(())
}

fn diag_usage(a: UsageArgs, o: &mut Outcome) -> Result<()> {
    let class = a
        .char_class
        .as_deref()
        .map(|s| s.parse::<CharClass>().map_err(|e| usage(e.to_string())))
        .transpose()?;
    let v = load_vocab(&a.vocab, o)?;
    let c = load_corpus(&a.input, o)?;
    let u = vocab_usage(&v, &c, class.as_ref());
    maybe_write(&a.output, &u.to_tsv(), o)?;
    o.stdout.push_str(&tsv_table(&u.to_tsv()));
    Ok(())
}

/// `LABEL:ROLE=PATH`.
fn parse_labeled(spec: &str) -> Result<(String, Roles, PathBuf)> {
    let bad = || usage(format!("--corpus `{spec}`: expected LABEL:ROLE=PATH"));
    let (head, path) = spec.split_once('=').ok_or_else(bad)?;
    let (label, role) = head.split_once(':').ok_or_else(bad)?;
    let roles = match role {
        "parent" => Roles {
            parent: true,
            child: false,
        },
        "child" => Roles {
            parent: false,
            child: true,
        },
        "both" => Roles {
            parent: true,
            child: true,
        },
        "none" => Roles::default(),
        _ => {
            return Err(usage(format!(
                "--corpus `{spec}`: role must be parent, child, both or none"
            )))
        }
    };
    if label.is_empty() || path.is_empty() {
        return Err(bad());
    }
    Ok((label.to_string(), roles, PathBuf::from(path)))
}

fn diag_overlap(a: OverlapArgs, o: &mut Outcome) -> Result<()> {
    let parsed = a.corpora.iter().map(|s| parse_labeled(s)).collect::<Result<Vec<_>>>()?;
    let v = load_vocab(&a.vocab, o)?;
    let corpora = parsed
        .into_iter()
        .map(|(label, roles, path)| {
            Ok(LabeledCorpus {
                label,
                roles,
                corpus: load_corpus(&path, o)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let b = overlap_breakdown(&v, &corpora, a.min_count)?;
    maybe_write(&a.output, &b.to_tsv(), o)?;
    o.stdout.push_str(&tsv_table(&b.to_tsv()));
    Ok(())
}

fn diag_filter_impact(a: FilterImpactArgs, o: &mut Outcome) -> Result<()> {
    let v = load_vocab(&a.vocab, o)?;
    let c = load_pair(&a.input, o)?;
    let r = length_filter_impact(&v, &c, a.max_tokens);
    maybe_write(&a.output, &r.to_tsv(), o)?;
    o.stdout.push_str(&tsv_table(&r.to_tsv()));
    Ok(())
}

fn corpus_filter(a: FilterArgs, o: &mut Outcome) -> Result<()> {
    let c = load_pair(&a.input, o)?;
    let (mut kept, word_report) = filter_by_word_length(&c, a.min_words, a.max_words.unwrap_or(usize::MAX));
    let mut rows = vec![
        vec!["filter".to_string(), "kept".into(), "dropped".into()],
        vec![
            "words".into(),
            word_report.kept.to_string(),
            word_report.dropped.to_string(),
        ],
    ];
    let mut total_dropped = word_report.dropped;
    if let (Some(vp), Some(max)) = (&a.vocab, a.max_subwords) {
        let v = load_vocab(vp, o)?;
        let (k, r) = filter_by_subword_length(&kept, &v, max);
        rows.push(vec!["subwords".into(), r.kept.to_string(), r.dropped.to_string()]);
        total_dropped += r.dropped;
        kept = k;
    }
    save_pair(&kept, &a.output, o)?;
    let report = xfervocab::FilterReport {
        kept: kept.len(),
        dropped: total_dropped,
    };
    maybe_write(&a.report, &report.to_tsv(), o)?;
    o.stdout.push_str(&table(&rows));
    Ok(())
}

fn corpus_sample(a: SampleArgs, o: &mut Outcome) -> Result<()> {
    o.seed = Some(a.seed);
    let files = a.input.iter().map(|p| load_lines(p, o)).collect::<Result<Vec<_>>>()?;
    let per_side = a
        .per_side
        .unwrap_or_else(|| files.iter().map(Vec::len).min().unwrap_or(0));
    let sources: Vec<&[String]> = files.iter().map(Vec::as_slice).collect();
    let out = sample_equal_many(&sources, per_side, a.seed)?;
    write_lines(&a.output, out.iter().map(String::as_str))?;
    o.outputs.push(a.output);
    writeln!(o.stdout, "{per_side} sentences from each of {} files", files.len())?;
    Ok(())
}

fn corpus_mix(a: MixArgs, o: &mut Outcome) -> Result<()> {
    o.seed = Some(a.seed);
    o.inputs([&a.auth_source, &a.auth_target, &a.synth_source, &a.synth_target])?;
    let auth = load_parallel(&a.auth_source, &a.auth_target)?;
    let synth = load_parallel(&a.synth_source, &a.synth_target)?;
    let mixed = mix_with_oversample(&auth, &synth, a.factor, a.seed)?;
    save_pair(&mixed, &a.output, o)?;
    writeln!(
        o.stdout,
        "{} pairs ({} x {} authentic + {} synthetic)",
        mixed.len(),
        a.factor,
        auth.len(),
        synth.len()
    )?;
    Ok(())
}

fn corpus_pseudo(a: PseudoArgs, o: &mut Outcome) -> Result<()> {
    o.seed = Some(a.seed);
    let c = load_pair(&a.input, o)?;
    let out = make_pseudo_related(&c, a.keep, a.seed)?;
    save_pair(&out, &a.output, o)?;
    Ok(())
}

fn corpus_corrupt(a: CorruptArgs, o: &mut Outcome) -> Result<()> {
    let mode: Corruption = a.mode.parse().map_err(|e: xfervocab::Error| usage(e.to_string()))?;
    o.seed = Some(a.seed);
    let c = load_pair(&a.input, o)?;
    save_pair(&corrupt_word_order(&c, mode, a.seed), &a.output, o)?;
    Ok(())
}

fn bleu_config(a: &BleuArgs) -> Result<BleuConfig> {
    let tokenize = match a.tokenize.as_str() {
        "none" => Tokenize::None,
        "13a" => Tokenize::Thirteen,
        "intl" => Tokenize::Intl,
        other => return Err(usage(format!("unknown tokenizer `{other}`; use 13a, intl or none"))),
    };
    let smoothing: Smoothing = a.smooth.parse().map_err(|e: xfervocab::Error| usage(e.to_string()))?;
    if a.max_order == 0 {
        return Err(usage("--max-order must be >= 1"));
    }
    Ok(BleuConfig {
        max_order: a.max_order,
        smoothing,
        tokenize,
        lowercase: a.lowercase,
        effective_order: !a.no_effective_order,
    })
}

fn eval_bleu(a: EvalBleuArgs, o: &mut Outcome) -> Result<()> {
    let cfg = bleu_config(&a.bleu)?;
    let hyp = load_lines(&a.hyp, o)?;
    let refs = a.refs.iter().map(|p| load_lines(p, o)).collect::<Result<Vec<_>>>()?;
    let report = corpus_bleu(&hyp, &refs, &cfg)?;
    maybe_write(&a.output, &report.to_tsv(), o)?;
    if a.score_only {
        writeln!(o.stdout, "{:.2}", report.score)?;
    } else {
        writeln!(o.stdout, "{report}")?;
        writeln!(o.stdout, "{}", report.signature)?;
    }
    Ok(())
}

fn eval_bootstrap(a: BootstrapArgs, o: &mut Outcome) -> Result<()> {
    let bleu = bleu_config(&a.bleu)?;
    o.seed = Some(a.seed);
    let ha = load_lines(&a.hyp_a, o)?;
    let hb = load_lines(&a.hyp_b, o)?;
    let r = load_lines(&a.reference, o)?;
    let cfg = BootstrapConfig {
        samples: a.samples,
        alpha: a.alpha,
        seed: a.seed,
        bleu,
    };
    let res = paired_bootstrap(&ha, &hb, &r, &cfg)?;
    maybe_write(&a.output, &res.to_tsv(), o)?;
    o.stdout.push_str(&tsv_table(&res.to_tsv()));
    Ok(())
}

fn eval_stop(a: StopArgs, o: &mut Outcome) -> Result<()> {
    let base: DeltaBase = a
        .delta_base
        .parse()
        .map_err(|e: xfervocab::Error| usage(e.to_string()))?;
    o.input(&a.curve)?;
    let curve = LearningCurve::load(&a.curve)?;
    let rule = StopRule {
        window_frac: a.window_frac,
        delta_frac: a.delta_frac,
        min_evals: a.min_evals,
        base,
    };
    let d = should_stop(&curve, &rule)?;
    let tsv = format!(
        "stop\tbest_step\tevaluations\twindow_len\twindow_best\tprior_best\tthreshold\n{}\t{}\t{}\t{}\t{:.6}\t{}\t{:.6}\n",
        d.stop,
        d.best_step,
        d.evaluations,
        d.window_len,
        d.window_best,
        d.prior_best.map_or_else(|| "-".to_string(), |p| format!("{p:.6}")),
        d.threshold
    );
    maybe_write(&a.output, &tsv, o)?;
    o.stdout.push_str(&tsv_table(&tsv));
    Ok(())
}

fn tokens(lines: Vec<String>) -> Vec<Vec<String>> {
    lines
        .into_iter()
        .map(|l| l.split_whitespace().map(str::to_string).collect())
        .collect()
}

fn eval_token_analysis(a: TokenAnalysisArgs, o: &mut Outcome) -> Result<()> {
    let child = tokens(load_lines(&a.child, o)?);
    let base = tokens(load_lines(&a.baseline, o)?);
    let reference = tokens(load_lines(&a.reference, o)?);
    let t = token_overlap_analysis(&child, &base, &reference)?;
    maybe_write(&a.output, &t.to_tsv(), o)?;
    o.stdout.push_str(&tsv_table(&t.to_tsv()));
    Ok(())
}

/// Whether `e` came from a flag combination that clap could not check.
pub fn is_usage_error(e: &anyhow::Error) -> bool {
    e.downcast_ref::<UsageError>().is_some()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labeled_corpus_spec() {
        let (l, r, p) = parse_labeled("cs:child=data/cs.txt").unwrap();
        assert_eq!(
            (l.as_str(), r, p),
            (
                "cs",
                Roles {
                    parent: false,
                    child: true
                },
                PathBuf::from("data/cs.txt")
            )
        );
        assert!(is_usage_error(&parse_labeled("cs=x").unwrap_err()));
        assert!(is_usage_error(&parse_labeled("cs:uncle=x").unwrap_err()));
    }

    #[test]
    fn aligned_table() {
        let t = table(&[vec!["a".into(), "10".into()], vec!["long".into(), "2".into()]]);
        assert_eq!(t, "a     10\nlong   2\n");
    }
}
