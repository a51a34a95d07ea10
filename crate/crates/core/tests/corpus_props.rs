use proptest::prelude::*;
use xfervocab::corpus::{
    corrupt_word_order, filter_by_subword_length, filter_by_word_length, make_pseudo_related, mix_with_oversample,
    Corruption,
};
use xfervocab::{ParallelCorpus, Vocabulary};

fn parallel() -> impl Strategy<Value = ParallelCorpus> {
    prop::collection::vec(("[a-dž ]{0,20}", "[a-dž ]{0,20}"), 0..15)
        .prop_map(|pairs| ParallelCorpus::from_pairs(pairs).unwrap())
}

fn is_subsequence(kept: &ParallelCorpus, all: &ParallelCorpus) -> bool {
    let mut it = all.pairs.iter();
    kept.pairs.iter().all(|p| it.any(|q| q == p))
}

proptest! {
    #[test]
    fn filters_keep_relative_order(c in parallel(), min in 0usize..3, max in 0usize..6) {
        let (kept, report) = filter_by_word_length(&c, min, max);
        prop_assert!(is_subsequence(&kept, &c));
        prop_assert_eq!(report.kept + report.dropped, c.len());
    }

    #[test]
    fn subword_filter_is_monotone(c in parallel(), a in 0usize..30, b in 0usize..30) {
        let v = Vocabulary::with_printable_ascii(["ab", "cd_"]).unwrap();
        let (lo, hi) = (a.min(b), a.max(b));
        let (k_lo, _) = filter_by_subword_length(&c, &v, lo);
        let (k_hi, _) = filter_by_subword_length(&c, &v, hi);
        prop_assert!(k_lo.len() <= k_hi.len());
        prop_assert!(is_subsequence(&k_lo, &c));
    }

    #[test]
    fn oversampled_size(c in parallel(), s in parallel(), factor in 1usize..4, seed: u64) {
        let m = mix_with_oversample(&c, &s, factor, seed).unwrap();
        prop_assert_eq!(m.len(), factor * c.len() + s.len());
        prop_assert_eq!(m, mix_with_oversample(&c, &s, factor, seed).unwrap());
    }

    #[test]
    fn pseudo_related_full_keep_is_identity(c in parallel(), seed: u64) {
        prop_assert_eq!(make_pseudo_related(&c, 1.0, seed).unwrap(), c);
    }

    #[test]
    fn seeded_corruption_is_reproducible(c in parallel(), seed: u64) {
        for mode in [Corruption::ShuffleSource, Corruption::ShuffleTarget, Corruption::ShufflePairing] {
            prop_assert_eq!(corrupt_word_order(&c, mode, seed), corrupt_word_order(&c, mode, seed));
        }
    }
}
