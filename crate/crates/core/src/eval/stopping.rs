use std::fs;
use std::path::Path;
use std::str::FromStr;

use crate::{Error, Result};

/// Development-set scores over training, steps strictly increasing.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct LearningCurve {
    points: Vec<(u64, f64)>,
}

impl LearningCurve {
    pub fn new(points: Vec<(u64, f64)>) -> Result<Self> {
        if let Some(w) = points.windows(2).find(|w| w[0].0 >= w[1].0) {
            return Err(Error::InvalidArgument(format!(
                "learning curve steps must increase strictly ({} then {})",
                w[0].0, w[1].0
            )));
        }
        if let Some((s, _)) = points.iter().find(|(_, v)| !v.is_finite()) {
            return Err(Error::InvalidArgument(format!("score at step {s} is not finite")));
        }
        Ok(LearningCurve { points })
    }

    /// Scores at steps 1, 2, 3, …
    pub fn from_scores(scores: impl IntoIterator<Item = f64>) -> Result<Self> {
        LearningCurve::new(scores.into_iter().zip(1..).map(|(s, i)| (i, s)).collect())
    }

    pub fn points(&self) -> &[(u64, f64)] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// `step<TAB>score` lines; a first line that does not parse is taken as
    /// a header.
    pub fn parse_tsv(text: &str, path: &Path) -> Result<Self> {
        let mut points = Vec::new();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let parsed = line
                .split_once('\t')
                .and_then(|(a, b)| Some((a.trim().parse().ok()?, b.trim().parse().ok()?)));
            match parsed {
                Some(p) => points.push(p),
                None if i == 0 => {}
                None => {
                    return Err(Error::Parse {
                        path: path.to_path_buf(),
                        line: i + 1,
                        message: "expected `step<TAB>score`".into(),
                    })
                }
            }
        }
        LearningCurve::new(points)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        LearningCurve::parse_tsv(&text, path)
    }
}

/// What the improvement threshold is a fraction of.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum DeltaBase {
    /// Best score over the whole curve.
    #[default]
    GlobalMax,
    /// Best score before the window.
    PreWindowMax,
}

impl FromStr for DeltaBase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.replace('-', "_").as_str() {
            "global_max" | "global" => Ok(DeltaBase::GlobalMax),
            "pre_window_max" | "pre_window" => Ok(DeltaBase::PreWindowMax),
            _ => Err(Error::InvalidArgument(format!("unknown delta base `{s}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StopRule {
    pub window_frac: f64,
    pub delta_frac: f64,
    pub min_evals: usize,
    pub base: DeltaBase,
}

impl Default for StopRule {
    fn default() -> Self {
        StopRule {
            window_frac: 0.5,
            delta_frac: 0.005,
            min_evals: 4,
            base: DeltaBase::GlobalMax,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StopDecision {
    pub stop: bool,
    /// Step of the first occurrence of the best score.
    pub best_step: u64,
    pub evaluations: usize,
    pub window_len: usize,
    pub window_best: f64,
    /// Best score before the window; `None` if the window is the whole curve.
    pub prior_best: Option<f64>,
    pub threshold: f64,
}

/// With `t` evaluations the window is the last `⌈window_frac · t⌉`. Stop
/// once `t ≥ min_evals` and the window's best exceeds the best before it by
/// at most `delta_frac` times the base score.
pub fn should_stop(curve: &LearningCurve, rule: &StopRule) -> Result<StopDecision> {
    should_stop_at(curve, curve.len(), rule)
}

/// [`should_stop`] on the first `t` points of `curve`.
pub fn should_stop_at(curve: &LearningCurve, t: usize, rule: &StopRule) -> Result<StopDecision> {
    if t == 0 || t > curve.len() {
        return Err(if curve.is_empty() {
            Error::EmptyCorpus
        } else {
            Error::InvalidArgument(format!("prefix {t} outside 1..={}", curve.len()))
        });
    }
    if !(rule.window_frac > 0.0 && rule.window_frac <= 1.0) {
        return Err(Error::InvalidArgument("window fraction must lie in (0, 1]".into()));
    }
    let points = &curve.points[..t];
    let window_len = ((rule.window_frac * t as f64).ceil() as usize).clamp(1, t);
    let (before, window) = points.split_at(t - window_len);
    let best = |ps: &[(u64, f64)]| ps.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
    let window_best = best(window);
    let prior_best = (!before.is_empty()).then(|| best(before));
    let (mut best_step, mut global) = points[0];
    for &(s, v) in &points[1..] {
        if v > global {
            global = v;
            best_step = s;
        }
    }
    let base = match rule.base {
        DeltaBase::GlobalMax => global,
        DeltaBase::PreWindowMax => prior_best.unwrap_or(global),
    };
    let threshold = rule.delta_frac * base;
    let stop = t >= rule.min_evals && prior_best.is_some_and(|p| window_best - p <= threshold);
    Ok(StopDecision {
        stop,
        best_step,
        evaluations: t,
        window_len,
        window_best,
        prior_best,
        threshold,
    })
}
