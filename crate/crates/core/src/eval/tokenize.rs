use std::fmt;
use std::str::FromStr;
use std::sync::LazyLock;

use regex::Regex;

use crate::{Error, Result};

/// BLEU pre-tokenization.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Tokenize {
    /// Split on whitespace only.
    None,
    /// The mteval-v13a rules: unescape a few XML entities, split off
    /// ASCII punctuation, and split `.` `,` unless between digits.
    #[default]
    Thirteen,
    /// Unicode-aware variant: split off any punctuation not adjacent to a
    /// digit and every symbol character.
    Intl,
}

impl Tokenize {
    pub fn name(self) -> &'static str {
        match self {
            Tokenize::None => "none",
            Tokenize::Thirteen => "13a",
            Tokenize::Intl => "intl",
        }
    }

    pub fn apply(self, line: &str) -> String {
        match self {
            Tokenize::None => line.split_whitespace().collect::<Vec<_>>().join(" "),
            Tokenize::Thirteen => thirteen_a(line),
            Tokenize::Intl => intl(line),
        }
    }
}

impl fmt::Display for Tokenize {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Tokenize {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(Tokenize::None),
            "13a" => Ok(Tokenize::Thirteen),
            "intl" => Ok(Tokenize::Intl),
            _ => Err(Error::InvalidArgument(format!("unknown tokenizer `{s}`"))),
        }
    }
}

fn apply_rules(rules: &[(Regex, &str)], line: &str) -> String {
    let mut s = line.to_string();
    for (re, rep) in rules {
        if let std::borrow::Cow::Owned(o) = re.replace_all(&s, *rep) {
            s = o;
        }
    }
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

static THIRTEEN_A: LazyLock<Vec<(Regex, &'static str)>> = LazyLock::new(|| {
    vec![
        (Regex::new(r"([\{-~\[-` -&\(-\+:-@/])").unwrap(), " $1 "),
        (Regex::new(r"([^0-9])([\.,])").unwrap(), "$1 $2 "),
        (Regex::new(r"([\.,])([^0-9])").unwrap(), " $1 $2"),
        (Regex::new(r"([0-9])(-)").unwrap(), "$1 $2 "),
    ]
});

static INTL: LazyLock<Vec<(Regex, &'static str)>> = LazyLock::new(|| {
    vec![
        (Regex::new(r"(\P{N})(\p{P})").unwrap(), "$1 $2 "),
        (Regex::new(r"(\p{P})(\P{N})").unwrap(), " $1 $2"),
        (Regex::new(r"(\p{S})").unwrap(), " $1 "),
    ]
});

fn thirteen_a(line: &str) -> String {
    let mut s = line.replace("<skipped>", "").replace("-\n", "").replace('\n', " ");
    if s.contains('&') {
        s = s
            .replace("&quot;", "\"")
            .replace("&amp;", "&")
            .replace("&lt;", "<")
            .replace("&gt;", ">");
    }
    apply_rules(&THIRTEEN_A, &format!(" {s} "))
}

fn intl(line: &str) -> String {
    apply_rules(&INTL, line)
}
