use std::collections::HashSet;

use rayon::prelude::*;

use crate::wordpiece::Vocabulary;

/// Slots whose candidate lists are computed together. Within a block a
/// slot can lose at most one candidate per earlier slot, so lists are
/// capped at the block size.
const BLOCK: usize = 512;

/// Character-level edit distance, or `None` if it exceeds `bound`.
pub fn edit_distance(a: &str, b: &str, bound: usize) -> Option<usize> {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    bounded(&a, &b, bound)
}

fn bounded(a: &[char], b: &[char], bound: usize) -> Option<usize> {
    if a.len().abs_diff(b.len()) > bound {
        return None;
    }
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut cur = vec![0; b.len() + 1];
    for (i, &ca) in a.iter().enumerate() {
        cur[0] = i + 1;
        let mut row_min = cur[0];
        for (j, &cb) in b.iter().enumerate() {
            let sub = prev[j] + usize::from(ca != cb);
            cur[j + 1] = sub.min(prev[j + 1] + 1).min(cur[j] + 1);
            row_min = row_min.min(cur[j + 1]);
        }
        if row_min > bound {
            return None;
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    let d = prev[b.len()];
    (d <= bound).then_some(d)
}

/// Shared tokens first, then for `d = 1, 2, …` each free slot in order takes
/// the first free child token (child order) at distance exactly `d`.
pub(super) fn assign(parent: &Vocabulary, child_tokens: &[String], in_child: &HashSet<&str>) -> Vec<Option<usize>> {
    let n = parent.len();
    let mut assigned: Vec<Option<usize>> = vec![None; n];
    let mut child_used = vec![false; child_tokens.len()];
    for (c, t) in child_tokens.iter().enumerate() {
        if let Some(slot) = parent.id(t) {
            assigned[slot as usize] = Some(c);
            child_used[c] = true;
        }
    }
    let parent_chars: Vec<Vec<char>> = parent.iter().map(|t| t.chars().collect()).collect();
    let child_chars: Vec<Vec<char>> = child_tokens.iter().map(|t| t.chars().collect()).collect();
    let max_len = parent_chars.iter().chain(&child_chars).map(Vec::len).max().unwrap_or(0);

    for d in 1..=max_len {
        let free_slots: Vec<usize> = (0..n)
            .filter(|&s| assigned[s].is_none() && !in_child.contains(parent.token(s as u32).unwrap_or("")))
            .collect();
        if free_slots.is_empty() || child_used.iter().all(|&u| u) {
            break;
        }
        for block in free_slots.chunks(BLOCK) {
            let free_children: Vec<usize> = (0..child_tokens.len()).filter(|&c| !child_used[c]).collect();
            if free_children.is_empty() {
                break;
            }
            let candidates: Vec<Vec<usize>> = block
                .par_iter()
                .map(|&s| {
                    free_children
                        .iter()
                        .copied()
                        .filter(|&c| bounded(&parent_chars[s], &child_chars[c], d) == Some(d))
                        .take(block.len())
                        .collect()
                })
                .collect();
            for (&s, cands) in block.iter().zip(candidates) {
                if let Some(c) = cands.into_iter().find(|&c| !child_used[c]) {
                    assigned[s] = Some(c);
                    child_used[c] = true;
                }
            }
        }
    }
    assigned
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn full(a: &str, b: &str) -> usize {
        let a: Vec<char> = a.chars().collect();
        let b: Vec<char> = b.chars().collect();
        let mut dp = vec![vec![0usize; b.len() + 1]; a.len() + 1];
        for i in 0..=a.len() {
            for j in 0..=b.len() {
                dp[i][j] = if i == 0 {
                    j
                } else if j == 0 {
                    i
                } else {
                    (dp[i - 1][j - 1] + usize::from(a[i - 1] != b[j - 1]))
                        .min(dp[i - 1][j] + 1)
                        .min(dp[i][j - 1] + 1)
                };
            }
        }
        dp[a.len()][b.len()]
    }

    #[test]
    fn known_distances() {
        assert_eq!(edit_distance("kitten", "sitting", 10), Some(3));
        assert_eq!(edit_distance("kitten", "sitting", 2), None);
        assert_eq!(edit_distance("", "abc", 3), Some(3));
        assert_eq!(edit_distance("vík", "vik", 1), Some(1));
    }

    proptest! {
        #[test]
        fn bounded_agrees_with_full_table(a in "[abc]{0,7}", b in "[abc]{0,7}", bound in 0usize..8) {
            let d = full(&a, &b);
            let expected = (d <= bound).then_some(d);
            prop_assert_eq!(edit_distance(&a, &b, bound), expected);
        }
    }
}
