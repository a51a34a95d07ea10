use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use super::tokenize::Tokenize;
use crate::{Error, Result, FORMAT_VERSION};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Smoothing {
    None,
    /// The k-th order with no matches gets precision `1 / (2^k · total)`.
    #[default]
    Exp,
}

impl Smoothing {
    pub fn name(self) -> &'static str {
        match self {
            Smoothing::None => "none",
            Smoothing::Exp => "exp",
        }
    }
}

impl FromStr for Smoothing {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(Smoothing::None),
            "exp" => Ok(Smoothing::Exp),
            _ => Err(Error::InvalidArgument(format!("unknown smoothing `{s}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BleuConfig {
    pub max_order: usize,
    pub smoothing: Smoothing,
    pub tokenize: Tokenize,
    pub lowercase: bool,
    /// Average only over orders that have at least one candidate n-gram,
    /// so corpora of very short sentences are not scored zero.
    pub effective_order: bool,
}

impl Default for BleuConfig {
    fn default() -> Self {
        BleuConfig {
            max_order: 4,
            smoothing: Smoothing::Exp,
            tokenize: Tokenize::Thirteen,
            lowercase: false,
            effective_order: true,
        }
    }
}

impl BleuConfig {
    /// Settings string printed next to scores.
    pub fn signature(&self, nrefs: usize) -> String {
        format!(
            "BLEU|nrefs:{nrefs}|case:{}|eff:{}|tok:{}|smooth:{}|order:{}|version:{FORMAT_VERSION}",
            if self.lowercase { "lc" } else { "mixed" },
            if self.effective_order { "yes" } else { "no" },
            self.tokenize,
            self.smoothing.name(),
            self.max_order,
        )
    }

    fn validate(&self) -> Result<()> {
        if self.max_order == 0 {
            return Err(Error::InvalidArgument("max n-gram order must be >= 1".into()));
        }
        Ok(())
    }

    fn prepare(&self, line: &str) -> String {
        let t = self.tokenize.apply(line);
        if self.lowercase {
            t.to_lowercase()
        } else {
            t
        }
    }
}

/// Sufficient statistics of one or more sentences.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BleuStats {
    pub sys_len: u64,
    pub ref_len: u64,
    pub matches: Vec<u64>,
    pub totals: Vec<u64>,
}

impl BleuStats {
    pub fn zero(max_order: usize) -> Self {
        BleuStats {
            sys_len: 0,
            ref_len: 0,
            matches: vec![0; max_order],
            totals: vec![0; max_order],
        }
    }

    pub fn add(&mut self, other: &BleuStats) {
        self.sys_len += other.sys_len;
        self.ref_len += other.ref_len;
        for (a, b) in self.matches.iter_mut().zip(&other.matches) {
            *a += b;
        }
        for (a, b) in self.totals.iter_mut().zip(&other.totals) {
            *a += b;
        }
    }
}

fn count_ngrams<'t>(tokens: &'t [&'t str], n: usize) -> HashMap<&'t [&'t str], u64> {
    let mut m = HashMap::new();
    if tokens.len() >= n {
        for w in tokens.windows(n) {
            *m.entry(w).or_insert(0) += 1;
        }
    }
    m
}

/// Statistics of a single candidate against its references (already
/// tokenized). Matches are clipped by the maximum count over references;
/// the reference length is the one closest to the candidate length, the
/// shorter on ties.
pub fn sentence_stats(candidate: &str, references: &[&str], max_order: usize) -> BleuStats {
    let cand: Vec<&str> = candidate.split_whitespace().collect();
    let refs: Vec<Vec<&str>> = references.iter().map(|r| r.split_whitespace().collect()).collect();
    let mut stats = BleuStats::zero(max_order);
    stats.sys_len = cand.len() as u64;
    stats.ref_len = refs
        .iter()
        .map(|r| r.len() as u64)
        .min_by_key(|&l| (l.abs_diff(stats.sys_len), l))
        .unwrap_or(0);
    for n in 1..=max_order {
        let c = count_ngrams(&cand, n);
        let mut max_ref: HashMap<&[&str], u64> = HashMap::new();
        for r in &refs {
            for (g, k) in count_ngrams(r, n) {
                let e = max_ref.entry(g).or_insert(0);
                *e = (*e).max(k);
            }
        }
        stats.totals[n - 1] = cand.len().saturating_sub(n - 1) as u64;
        stats.matches[n - 1] = c
            .iter()
            .map(|(g, &k)| k.min(max_ref.get(g).copied().unwrap_or(0)))
            .sum();
    }
    stats
}

#[derive(Clone, Debug, PartialEq)]
pub struct BleuReport {
    /// BLEU × 100.
    pub score: f64,
    /// Precision per order as used in the score (after smoothing), in [0, 1].
    pub precisions: Vec<f64>,
    pub weights: Vec<f64>,
    pub bp: f64,
    pub sys_len: u64,
    pub ref_len: u64,
    pub matches: Vec<u64>,
    pub totals: Vec<u64>,
    pub signature: String,
}

impl BleuReport {
    pub const TSV_HEADER: &'static str = "score\tbp\tsys_len\tref_len\tprecisions\tsignature";

    pub fn to_tsv(&self) -> String {
        let p: Vec<String> = self.precisions.iter().map(|p| format!("{:.6}", p * 100.0)).collect();
        format!(
            "{}\n{:.6}\t{:.6}\t{}\t{}\t{}\t{}\n",
            Self::TSV_HEADER,
            self.score,
            self.bp,
            self.sys_len,
            self.ref_len,
            p.join("/"),
            self.signature
        )
    }
}

impl fmt::Display for BleuReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p: Vec<String> = self.precisions.iter().map(|p| format!("{:.1}", p * 100.0)).collect();
        write!(
            f,
            "BLEU = {:.2} {} (BP = {:.3} ratio = {:.3} hyp_len = {} ref_len = {})",
            self.score,
            p.join("/"),
            self.bp,
            if self.ref_len == 0 {
                0.0
            } else {
                self.sys_len as f64 / self.ref_len as f64
            },
            self.sys_len,
            self.ref_len
        )
    }
}

pub fn brevity_penalty(sys_len: u64, ref_len: u64) -> f64 {
    if sys_len > ref_len {
        1.0
    } else if sys_len == 0 {
        0.0
    } else {
        (1.0 - ref_len as f64 / sys_len as f64).exp()
    }
}

/// Corpus BLEU from accumulated statistics.
pub fn score_stats(stats: &BleuStats, config: &BleuConfig, nrefs: usize) -> BleuReport {
    let n = config.max_order;
    let bp = brevity_penalty(stats.sys_len, stats.ref_len);
    let mut precisions = vec![0.0; n];
    let mut eff_order = n;
    let mut smooth = 1.0;
    for (k, p) in precisions.iter_mut().enumerate() {
        if stats.totals[k] == 0 {
            if config.effective_order {
                eff_order = k;
            }
            break;
        }
        *p = if stats.matches[k] > 0 {
            stats.matches[k] as f64 / stats.totals[k] as f64
        } else if config.smoothing == Smoothing::Exp {
            smooth *= 2.0;
            1.0 / (smooth * stats.totals[k] as f64)
        } else {
            0.0
        };
    }
    let no_match = stats.matches.iter().all(|&m| m == 0);
    let score = if no_match || eff_order == 0 || precisions[..eff_order].contains(&0.0) {
        0.0
    } else {
        let mean_log = precisions[..eff_order].iter().map(|p| p.ln()).sum::<f64>() / eff_order as f64;
        100.0 * bp * mean_log.exp()
    };
    let w = if eff_order == 0 { 0.0 } else { 1.0 / eff_order as f64 };
    BleuReport {
        score,
        precisions,
        weights: (0..n).map(|k| if k < eff_order { w } else { 0.0 }).collect(),
        bp,
        sys_len: stats.sys_len,
        ref_len: stats.ref_len,
        matches: stats.matches.clone(),
        totals: stats.totals.clone(),
        signature: config.signature(nrefs),
    }
}

fn check_streams<S: AsRef<str>>(candidates: &[S], references: &[Vec<S>]) -> Result<()> {
    if candidates.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    if references.is_empty() {
        return Err(Error::InvalidArgument(
            "at least one reference stream is required".into(),
        ));
    }
    for r in references {
        if r.len() != candidates.len() {
            return Err(Error::LengthMismatch {
                what: "candidates and references",
                left: candidates.len(),
                right: r.len(),
            });
        }
    }
    Ok(())
}

/// Per-sentence statistics for `candidates` against one or more reference
/// streams, each as long as `candidates`.
pub fn corpus_stats<S: AsRef<str> + Sync>(
    candidates: &[S],
    references: &[Vec<S>],
    config: &BleuConfig,
) -> Result<Vec<BleuStats>> {
    config.validate()?;
    check_streams(candidates, references)?;
    Ok((0..candidates.len())
        .into_par_iter()
        .map(|i| {
            let cand = config.prepare(candidates[i].as_ref());
            let refs: Vec<String> = references.iter().map(|r| config.prepare(r[i].as_ref())).collect();
            let refs: Vec<&str> = refs.iter().map(String::as_str).collect();
            sentence_stats(&cand, &refs, config.max_order)
        })
        .collect())
}

pub fn sum_stats<'a>(stats: impl IntoIterator<Item = &'a BleuStats>, max_order: usize) -> BleuStats {
    let mut total = BleuStats::zero(max_order);
    for s in stats {
        total.add(s);
    }
    total
}

/// Corpus BLEU with any number of reference streams.
pub fn corpus_bleu<S: AsRef<str> + Sync>(
    candidates: &[S],
    references: &[Vec<S>],
    config: &BleuConfig,
) -> Result<BleuReport> {
    let per_sentence = corpus_stats(candidates, references, config)?;
    let total = sum_stats(&per_sentence, config.max_order);
    Ok(score_stats(&total, config, references.len()))
}

/// Corpus BLEU against a single reference per candidate.
pub fn bleu<S: AsRef<str> + Sync + Clone>(
    candidates: &[S],
    references: &[S],
    config: &BleuConfig,
) -> Result<BleuReport> {
    corpus_bleu(candidates, &[references.to_vec()], config)
}
