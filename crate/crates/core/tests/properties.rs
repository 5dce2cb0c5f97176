mod support;

use proptest::prelude::*;

use punkt_stats::corpus::{normalize_text, tokenize_words, CleanDocument, NormalizeOptions};
use punkt_stats::fitting::{fit_power_law, FitWindow};
use punkt_stats::ranking::rank_descending;
use punkt_stats::segmentation::{count_marks, split_by_mark, MarkClass};
use punkt_stats::series::{build_fts, build_lts, build_word_frequency_table};
use support::{reference_counts, reference_split, sum_of_squared_frequencies};

fn text_strategy() -> impl Strategy<Value = String> {
    proptest::collection::vec(
        prop_oneof![
            Just('a'),
            Just('b'),
            Just('ŝ'),
            Just(' '),
            Just(' '),
            Just('.'),
            Just(','),
            Just(':'),
            Just(';'),
            Just('!'),
            Just('?'),
            Just('\''),
            Just('\n'),
        ],
        0..120,
    )
    .prop_map(|cs| cs.into_iter().collect())
}

fn class_strategy() -> impl Strategy<Value = MarkClass> {
    proptest::sample::select(MarkClass::ALL.to_vec())
}

proptest! {
    #[test]
    fn split_matches_reference(text in text_strategy(), class in class_strategy()) {
        let doc = CleanDocument::from_text("p", text.clone());
        let got: Vec<_> = split_by_mark(&doc, class)
            .iter()
            .map(|s| (s.start, s.end, s.terminator, s.length_chars))
            .collect();
        prop_assert_eq!(got, reference_split(&text, class));
    }

    #[test]
    fn segments_partition_the_document(text in text_strategy(), class in class_strategy()) {
        let doc = CleanDocument::from_text("p", text.clone());
        let chars: Vec<char> = text.chars().collect();
        let segs = split_by_mark(&doc, class);
        let mut covered = vec![false; chars.len()];
        for (i, s) in segs.iter().enumerate() {
            prop_assert_eq!(s.ordinal, i);
            prop_assert!(s.length_chars >= 1);
            prop_assert_eq!(s.end - s.start, s.length_chars);
            if i > 0 {
                prop_assert!(segs[i - 1].end <= s.start);
            }
            for c in &mut covered[s.start..s.end] {
                *c = true;
            }
        }
        // Everything outside segments is a blank or a terminator.
        let inside: usize = segs.iter().map(|s| s.length_chars).sum();
        let outside_blanks = chars.iter().zip(&covered).filter(|(c, cov)| !**cov && c.is_whitespace()).count();
        let outside_marks = chars.iter().zip(&covered).filter(|(c, cov)| !**cov && class.is_terminator(**c)).count();
        prop_assert_eq!(inside + outside_blanks + outside_marks, chars.len());

        let lts = build_lts(&segs, class);
        if let Ok(lts) = lts {
            prop_assert_eq!(lts.total(), inside);
        } else {
            prop_assert!(segs.is_empty());
        }
    }

    #[test]
    fn unit_terminators_refine_single_classes(text in text_strategy()) {
        let doc = CleanDocument::from_text("p", text);
        let ends = |class| -> Vec<usize> {
            split_by_mark(&doc, class).iter().filter(|s| s.terminator.is_some()).map(|s| s.end).collect()
        };
        let counts = count_marks(&doc);
        let parts = [MarkClass::Dot, MarkClass::Semicolon, MarkClass::Exclamation, MarkClass::Question];
        prop_assert_eq!(
            counts.get(MarkClass::UnitOfThought),
            parts.iter().map(|&c| counts.get(c)).sum::<usize>()
        );
        for e in ends(MarkClass::UnitOfThought) {
            let hits = parts.iter().filter(|&&c| ends(c).contains(&e)).count();
            prop_assert!(hits <= 1);
        }
    }

    #[test]
    fn mark_counts_match_brute_force(text in text_strategy()) {
        let counts = count_marks(&CleanDocument::from_text("p", text.clone()));
        let reference = reference_counts(&text);
        for (class, mark) in MarkClass::SINGLE.iter().zip(['.', ',', ':', ';', '!', '?']) {
            prop_assert_eq!(counts.get(*class), reference.get(&mark).copied().unwrap_or(0));
        }
    }

    #[test]
    fn normalize_is_idempotent_and_shrinking(text in text_strategy(), crlf in any::<bool>()) {
        let text = if crlf { text.replace('\n', "\r\n") } else { text };
        let opts = NormalizeOptions::default();
        let once = normalize_text(&CleanDocument::from_text("p", text.clone()), &opts);
        let twice = normalize_text(&once, &opts);
        prop_assert_eq!(&once.content, &twice.content);
        prop_assert!(once.content.chars().count() <= text.chars().count());
        prop_assert!(!once.content.contains('\r') && !once.content.contains("  "));
    }

    #[test]
    fn tokens_conserve_letters(text in text_strategy()) {
        let doc = CleanDocument::from_text("p", text.clone());
        let tokens = tokenize_words(&doc);
        for (i, t) in tokens.iter().enumerate() {
            prop_assert_eq!(t.ordinal, i);
            prop_assert!(!t.surface.is_empty());
        }
        let mut from_tokens: Vec<char> = tokens.iter().flat_map(|t| t.surface.chars()).filter(|c| c.is_alphabetic()).collect();
        let mut from_doc: Vec<char> = text.chars().filter(|c| c.is_alphabetic()).collect();
        from_tokens.sort_unstable();
        from_doc.sort_unstable();
        prop_assert_eq!(from_tokens, from_doc);
    }

    #[test]
    fn fts_sum_is_sum_of_squared_frequencies(words in proptest::collection::vec("[a-e]{1,2}", 1..200)) {
        let text = words.join(" ");
        let tokens = tokenize_words(&CleanDocument::from_text("p", text));
        let table = build_word_frequency_table(&tokens).unwrap();
        let fts = build_fts(&tokens, &table).unwrap();
        prop_assert_eq!(fts.values.len(), table.total_tokens());
        let total: usize = fts.values.iter().map(|v| v.1).sum();
        prop_assert_eq!(total, sum_of_squared_frequencies(&words));
        let entries: Vec<_> = table.entries().collect();
        prop_assert_eq!(entries.iter().map(|e| e.1.frequency).sum::<usize>(), table.total_tokens());
        let mut firsts: Vec<_> = entries.iter().map(|e| e.1.first_ordinal).collect();
        firsts.dedup();
        prop_assert_eq!(firsts.len(), entries.len());
    }

    #[test]
    fn ranking_invariants(values in proptest::collection::vec(1u32..20, 1..150), scale in 0.01f64..100.0) {
        let pairs: Vec<(usize, f64)> = values.iter().enumerate().map(|(i, &v)| (i, v as f64)).collect();
        let ranked = rank_descending(&pairs, "p").unwrap();
        for (i, it) in ranked.items.iter().enumerate() {
            prop_assert_eq!(it.rank, i + 1);
            if i > 0 {
                let prev = ranked.items[i - 1];
                prop_assert!(prev.value >= it.value);
                if prev.value == it.value {
                    prop_assert!(prev.origin < it.origin);
                }
            }
        }
        let mut a: Vec<u64> = ranked.items.iter().map(|i| i.value as u64).collect();
        let mut b: Vec<u64> = values.iter().map(|&v| v as u64).collect();
        a.sort_unstable();
        b.sort_unstable();
        prop_assert_eq!(a, b);

        let mut shuffled = pairs.clone();
        shuffled.reverse();
        prop_assert_eq!(&rank_descending(&shuffled, "p").unwrap(), &ranked);

        let scaled: Vec<(usize, f64)> = pairs.iter().map(|&(o, v)| (o, v * scale)).collect();
        let origins = |r: &punkt_stats::ranking::RankedSeries| r.items.iter().map(|i| i.origin).collect::<Vec<_>>();
        prop_assert_eq!(origins(&rank_descending(&scaled, "p").unwrap()), origins(&ranked));
    }

    #[test]
    fn power_law_recovery_and_scale_covariance(
        exponent in 0.1f64..2.0,
        amplitude in 1.0f64..1e4,
        n in 3usize..400,
        scale in 0.01f64..100.0,
    ) {
        let values: Vec<(usize, f64)> = (1..=n).map(|r| (r, amplitude * (r as f64).powf(-exponent))).collect();
        let ranked = rank_descending(&values, "p").unwrap();
        let window = FitWindow::new(1, n).unwrap();
        let fit = fit_power_law(&ranked, window).unwrap();
        prop_assert!((fit.exponent - exponent).abs() <= 1e-9);
        prop_assert!((fit.amplitude - amplitude).abs() <= 1e-9 * amplitude.max(1.0));

        // Every sub-window sees the same exponent.
        if n >= 8 {
            let sub = fit_power_law(&ranked, FitWindow::new(n / 4 + 1, n / 2 + 3).unwrap()).unwrap();
            prop_assert!((sub.exponent - exponent).abs() <= 1e-9);
        }

        let scaled: Vec<(usize, f64)> = values.iter().map(|&(o, v)| (o, v * scale)).collect();
        let fit_scaled = fit_power_law(&rank_descending(&scaled, "p").unwrap(), window).unwrap();
        prop_assert!((fit_scaled.exponent - fit.exponent).abs() <= 1e-12);
        prop_assert!((fit_scaled.amplitude / fit.amplitude - scale).abs() <= 1e-9 * scale);

        // Refitting the model's own predictions reproduces the exponent.
        let predicted: Vec<(usize, f64)> = (1..=n).map(|r| (r, fit.predict(r as f64))).collect();
        let refit = fit_power_law(&rank_descending(&predicted, "p").unwrap(), window).unwrap();
        prop_assert!((refit.exponent - fit.exponent).abs() <= 1e-12);
        prop_assert_eq!(refit.n_points, n);
    }
}
