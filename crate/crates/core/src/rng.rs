//! Seeded randomness.
//!
//! All stochastic operations draw from ChaCha8 generators seeded with
//! [`seeded`]. Independent sub-tasks (one resample, one input file) use
//! separate streams of the same seed via [`stream`], so their results do not
//! depend on evaluation order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn stream(seed: u64, stream: u64) -> SeededRng {
    let mut rng = seeded(seed);
    rng.set_stream(stream);
    rng
}

/// In-place Fisher–Yates shuffle.
///
/// For `i` from `len - 1` down to `1`, swaps element `i` with an element drawn
/// uniformly from `0..=i`. The exact draw sequence is part of the
/// reproducibility contract; do not replace this with a library shuffle.
pub fn fisher_yates<T, R: Rng + ?Sized>(items: &mut [T], rng: &mut R) {
    for i in (1..items.len()).rev() {
        let j = rng.gen_range(0..=i);
        items.swap(i, j);
    }
}

/// `k` distinct indices drawn uniformly without replacement from `0..n`, in
/// draw order. This is the first `k` steps of a forward Fisher–Yates pass.
pub fn sample_indices<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> Vec<usize> {
    assert!(k <= n, "cannot sample {k} of {n}");
    let mut pool: Vec<usize> = (0..n).collect();
    for i in 0..k {
        let j = rng.gen_range(i..n);
        pool.swap(i, j);
    }
    pool.truncate(k);
    pool
}

/// A uniformly random derangement of `0..n` (no `i` maps to itself), by
/// rejection sampling over Fisher–Yates permutations. Requires `n != 1`.
pub fn derangement<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<usize> {
    assert!(n != 1, "no derangement of a single element exists");
    let mut perm: Vec<usize> = (0..n).collect();
    loop {
        fisher_yates(&mut perm, rng);
        if perm.iter().enumerate().all(|(i, &p)| i != p) {
            return perm;
        }
        perm.sort_unstable();
    }
}
