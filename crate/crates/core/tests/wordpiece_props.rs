use proptest::prelude::*;
use xfervocab::diagnostics::segmentation_rate;
use xfervocab::wordpiece::{apply_wordpiece, detokenize, learn_wordpiece, PieceKind, VocabSpec, Vocabulary};
use xfervocab::Corpus;

fn vocab() -> impl Strategy<Value = Vocabulary> {
    prop::collection::btree_set("[abcí]{1,4}_?", 0..20).prop_map(|set| {
        let mut tokens: Vec<String> = set.into_iter().collect();
        for c in ["a", "b", "c"] {
            if !tokens.iter().any(|t| t == c) {
                tokens.push(c.to_string());
            }
        }
        Vocabulary::new(tokens).unwrap()
    })
}

proptest! {
    #[test]
    fn roundtrip_with_escapes(v in vocab(), s in "[abcíž_\\\\;0-9 .,!]{0,30}") {
        let toks = apply_wordpiece(&v, &s);
        prop_assert_eq!(detokenize(&toks).unwrap(), s);
    }

    #[test]
    fn roundtrip_with_printable_ascii(s in "[ -~]{0,40}") {
        let v = Vocabulary::with_printable_ascii(["the_", "ab", "a b", ". "]).unwrap();
        prop_assert_eq!(detokenize(&apply_wordpiece(&v, &s)).unwrap(), s);
    }

    #[test]
    fn greedy_longest_match(v in vocab(), words in prop::collection::vec("[abc]{1,6}", 1..5)) {
        let sentence = words.join(" ");
        let pieces = v.pieces(&sentence);
        let mut it = pieces.iter().peekable();
        for w in &words {
            let rest_full = format!("{w}_");
            let mut pos = 0;
            while pos < rest_full.len() {
                let p = it.next().expect("pieces cover every word");
                let rest = &rest_full[pos..];
                match p.kind {
                    PieceKind::Token => {
                        prop_assert!(rest.starts_with(p.text));
                        let longer = (p.text.len() + 1..=rest.len()).any(|l| v.contains(&rest[..l]));
                        prop_assert!(!longer, "{} emitted but a longer prefix of {} exists", p.text, rest);
                        pos += p.text.len();
                    }
                    PieceKind::WordEnd => {
                        prop_assert_eq!(rest, "_");
                        pos += 1;
                    }
                    PieceKind::Escape => prop_assert!(false, "no escapes expected"),
                }
            }
        }
        prop_assert!(it.next().is_none());
    }

    #[test]
    fn learned_vocabulary_rate_at_least_one(lines in prop::collection::vec("[a-fA-F ,.]{1,30}", 1..20), target in 20usize..80) {
        let c = Corpus::from_lines(lines).unwrap();
        prop_assume!(c.word_count() > 0);
        let spec = VocabSpec { target_size: target, tolerance: 0.1, ..VocabSpec::default() };
        let b = learn_wordpiece(std::slice::from_ref(&c), &spec).unwrap();
        prop_assert!(b.vocab.missing_reserved().is_empty());
        prop_assert!(segmentation_rate(&b.vocab, &c).unwrap().rate() >= 1.0);
        for s in c.iter() {
            prop_assert_eq!(detokenize(&apply_wordpiece(&b.vocab, s)).unwrap(), s);
        }
    }
}

#[test]
fn english_figure_decodes_code_point_237() {
    let v = Vocabulary::with_printable_ascii(["bud", "dom", "end", "ho", "me", "week_", "will"]).unwrap();
    let toks = apply_wordpiece(&v, "víkendu");
    let i = toks.iter().position(|t| t == "\\").unwrap();
    assert_eq!(toks[i..i + 5].concat(), "\\237;");
    assert_eq!(char::from_u32(237), Some('í'));
    assert_eq!(detokenize(&toks).unwrap(), "víkendu");
}
