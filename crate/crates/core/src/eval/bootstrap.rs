use std::fmt;

use rand::Rng;
use rayon::prelude::*;

use super::bleu::{corpus_stats, score_stats, BleuConfig, BleuStats};
use crate::{rng, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Better {
    A,
    B,
    None,
}

impl fmt::Display for Better {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Better::A => "A",
            Better::B => "B",
            Better::None => "none",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SignificanceResult {
    pub wins_a: usize,
    pub wins_b: usize,
    pub ties: usize,
    pub samples: usize,
    pub better: Better,
    /// `1 - alpha`.
    pub confidence_level: f64,
    /// BLEU of each system on the full test set.
    pub score_a: f64,
    pub score_b: f64,
}

impl SignificanceResult {
    pub const TSV_HEADER: &'static str = "score_a\tscore_b\twins_a\twins_b\tties\tsamples\tconfidence_level\tbetter";

    pub fn to_tsv(&self) -> String {
        format!(
            "{}\n{:.6}\t{:.6}\t{}\t{}\t{}\t{}\t{:.6}\t{}\n",
            Self::TSV_HEADER,
            self.score_a,
            self.score_b,
            self.wins_a,
            self.wins_b,
            self.ties,
            self.samples,
            self.confidence_level,
            self.better
        )
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BootstrapConfig {
    pub samples: usize,
    pub alpha: f64,
    pub seed: u64,
    pub bleu: BleuConfig,
}

impl BootstrapConfig {
    pub fn new(seed: u64) -> Self {
        BootstrapConfig {
            samples: 1000,
            alpha: 0.05,
            seed,
            bleu: BleuConfig::default(),
        }
    }
}

/// Paired bootstrap resampling. Resample `i` draws test-set indices with
/// replacement from RNG stream `i`, so results do not depend on how the
/// resamples are scheduled.
pub fn paired_bootstrap<S: AsRef<str> + Sync>(
    cand_a: &[S],
    cand_b: &[S],
    references: &[S],
    config: &BootstrapConfig,
) -> Result<SignificanceResult> {
    if cand_a.len() != cand_b.len() {
        return Err(Error::LengthMismatch {
            what: "system A and system B",
            left: cand_a.len(),
            right: cand_b.len(),
        });
    }
    if config.samples == 0 {
        return Err(Error::InvalidArgument("samples must be >= 1".into()));
    }
    if !(config.alpha > 0.0 && config.alpha < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "alpha {} must lie in (0, 1)",
            config.alpha
        )));
    }
    let refs: Vec<&str> = references.iter().map(AsRef::as_ref).collect();
    let a: Vec<&str> = cand_a.iter().map(AsRef::as_ref).collect();
    let b: Vec<&str> = cand_b.iter().map(AsRef::as_ref).collect();
    let stats_a = corpus_stats(&a, std::slice::from_ref(&refs), &config.bleu)?;
    let stats_b = corpus_stats(&b, std::slice::from_ref(&refs), &config.bleu)?;
    Ok(bootstrap_stats(&stats_a, &stats_b, config))
}

/// [`paired_bootstrap`] on precomputed per-sentence statistics.
pub fn bootstrap_stats(stats_a: &[BleuStats], stats_b: &[BleuStats], config: &BootstrapConfig) -> SignificanceResult {
    let n = stats_a.len();
    let order = config.bleu.max_order;
    let score = |s: &BleuStats| score_stats(s, &config.bleu, 1).score;
    let full_a = score(&super::bleu::sum_stats(stats_a, order));
    let full_b = score(&super::bleu::sum_stats(stats_b, order));

    let outcomes: Vec<std::cmp::Ordering> = (0..config.samples)
        .into_par_iter()
        .map(|i| {
            let mut r = rng::stream(config.seed, i as u64);
            let mut sa = BleuStats::zero(order);
            let mut sb = BleuStats::zero(order);
            for _ in 0..n {
                let j = r.gen_range(0..n);
                sa.add(&stats_a[j]);
                sb.add(&stats_b[j]);
            }
            score(&sa).total_cmp(&score(&sb))
        })
        .collect();
    let wins_a = outcomes.iter().filter(|o| o.is_gt()).count();
    let wins_b = outcomes.iter().filter(|o| o.is_lt()).count();
    let ties = config.samples - wins_a - wins_b;
    let needed = 1.0 - config.alpha;
    let frac = |w: usize| w as f64 / config.samples as f64;
    let better = if frac(wins_a) >= needed {
        Better::A
    } else if frac(wins_b) >= needed {
        Better::B
    } else {
        Better::None
    };
    SignificanceResult {
        wins_a,
        wins_b,
        ties,
        samples: config.samples,
        better,
        confidence_level: needed,
        score_a: full_a,
        score_b: full_b,
    }
}
