use std::collections::HashMap;

use crate::{Error, Result};

/// Child-output tokens classified by whether the baseline output and the
/// reference also contain them.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TokenOverlap {
    pub baseline_and_reference: usize,
    pub baseline_only: usize,
    pub reference_only: usize,
    pub neither: usize,
}

impl TokenOverlap {
    pub fn total(&self) -> usize {
        self.baseline_and_reference + self.baseline_only + self.reference_only + self.neither
    }

    pub const TSV_HEADER: &'static str = "class\ttokens\tpercent";

    pub fn to_tsv(&self) -> String {
        let total = self.total().max(1) as f64;
        let mut s = format!("{}\n", Self::TSV_HEADER);
        for (name, n) in [
            ("baseline_and_reference", self.baseline_and_reference),
            ("baseline_only", self.baseline_only),
            ("reference_only", self.reference_only),
            ("neither", self.neither),
        ] {
            s.push_str(&format!("{name}\t{n}\t{:.2}\n", 100.0 * n as f64 / total));
        }
        s
    }
}

struct Bag<'a>(HashMap<&'a str, usize>);

impl<'a> Bag<'a> {
    fn new<S: AsRef<str>>(tokens: &'a [S]) -> Self {
        let mut m = HashMap::new();
        for t in tokens {
            *m.entry(t.as_ref()).or_insert(0) += 1;
        }
        Bag(m)
    }

    fn take(&mut self, t: &str) -> bool {
        match self.0.get_mut(t) {
            Some(n) if *n > 0 => {
                *n -= 1;
                true
            }
            _ => false,
        }
    }
}

/// Per sentence, each child token is matched against the baseline and the
/// reference independently; every baseline or reference token can match
/// at most one child token.
pub fn token_overlap_analysis<S: AsRef<str>>(
    child: &[Vec<S>],
    baseline: &[Vec<S>],
    reference: &[Vec<S>],
) -> Result<TokenOverlap> {
    for (what, other) in [("child and baseline", baseline), ("child and reference", reference)] {
        if other.len() != child.len() {
            return Err(Error::LengthMismatch {
                what,
                left: child.len(),
                right: other.len(),
            });
        }
    }
    let mut out = TokenOverlap::default();
    for ((c, b), r) in child.iter().zip(baseline).zip(reference) {
        let mut b = Bag::new(b);
        let mut r = Bag::new(r);
        for t in c {
            let t = t.as_ref();
            match (b.take(t), r.take(t)) {
                (true, true) => out.baseline_and_reference += 1,
                (true, false) => out.baseline_only += 1,
                (false, true) => out.reference_only += 1,
                (false, false) => out.neither += 1,
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(tokens: &[&str]) -> Vec<String> {
        tokens.iter().map(|t| t.to_string()).collect()
    }

    #[test]
    fn small_example() {
        let o = token_overlap_analysis(&[s(&["a", "b"])], &[s(&["a"])], &[s(&["b"])]).unwrap();
        assert_eq!(o.baseline_only, 1);
        assert_eq!(o.reference_only, 1);
        assert_eq!(o.total(), 2);
    }

    #[test]
    fn all_equal() {
        let x = vec![s(&["a", "b", "a"])];
        let o = token_overlap_analysis(&x, &x, &x).unwrap();
        assert_eq!(o.baseline_and_reference, 3);
    }

    #[test]
    fn clipping() {
        let o = token_overlap_analysis(&[s(&["a", "a", "a"])], &[s(&["a", "a"])], &[s(&["a"])]).unwrap();
        assert_eq!((o.baseline_and_reference, o.baseline_only, o.neither), (1, 1, 1));
    }

    #[test]
    fn length_mismatch() {
        assert!(token_overlap_analysis(&[s(&["a"])], &[], &[s(&["a"])]).is_err());
    }
}
