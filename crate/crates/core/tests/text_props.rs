//! Invariants of the cleanup → matrix → analysis chain over generated text.

use bwlf::ingest::{self, clean_line, mark_structure, MarkedToken};
use bwlf::lexicon::{analyze, match_word, LexiconDictionary};
use bwlf::matrix::{self, build_matrix, detect_speech, number_structure, strip_word};
use bwlf::rules::{CleanupRules, HyphenPolicy};
use proptest::prelude::*;

/// Words, punctuation and quotes in roughly verse-like proportions.
fn document() -> impl Strategy<Value = String> {
    let piece = prop_oneof![
        6 => "[a-zA-Z']{1,9}",
        1 => Just(",".to_string()),
        1 => Just(";".to_string()),
        1 => Just(":".to_string()),
        1 => Just("-".to_string()),
        1 => Just(".".to_string()),
        1 => Just("!".to_string()),
        1 => Just("?".to_string()),
        1 => Just("\"".to_string()),
        3 => Just(" ".to_string()),
        1 => Just("\n".to_string()),
    ];
    prop::collection::vec(piece, 0..200).prop_map(|p| p.concat())
}

fn stream() -> impl Strategy<Value = Vec<MarkedToken>> {
    let token = prop_oneof![
        1 => Just(MarkedToken::Canto),
        2 => Just(MarkedToken::Line),
        8 => "[a-z'\".!?,]{1,8}".prop_map(MarkedToken::Word),
    ];
    prop::collection::vec(token, 0..80)
}

/// Independent restatement of the strip rule.
fn oracle_strip(word: &str) -> String {
    let mut s: String = word.chars().filter(|&c| c != '"').collect();
    while s.ends_with(['.', '!', '?']) {
        s.pop();
    }
    s
}

proptest! {
    #[test]
    fn cleaned_words_obey_rules(doc in document()) {
        let rules = CleanupRules::default();
        for line in doc.lines() {
            for w in clean_line(line, &rules) {
                prop_assert!(!w.is_empty());
                prop_assert!(!w.contains([',', ':', ';', '-']));
                prop_assert!(!w.chars().any(char::is_whitespace));
                prop_assert_eq!(w.to_lowercase(), w.clone());
            }
        }
    }

    #[test]
    fn keep_policy_only_adds_hyphens(doc in document()) {
        let keep = CleanupRules { hyphen_policy: HyphenPolicy::Keep, ..CleanupRules::default() };
        let split = CleanupRules::default();
        for line in doc.lines() {
            let joined: String = clean_line(line, &keep).concat().replace('-', "");
            prop_assert_eq!(joined, clean_line(line, &split).concat());
        }
    }

    #[test]
    fn order_is_preserved(doc in document()) {
        let rules = CleanupRules::default();
        let words: Vec<String> = mark_structure(&doc, &rules)
            .into_iter()
            .filter_map(|t| match t { MarkedToken::Word(w) => Some(w), _ => None })
            .collect();
        let from_lines: Vec<String> = doc.lines().flat_map(|l| clean_line(l, &rules)).collect();
        prop_assert_eq!(words, from_lines);
    }

    #[test]
    fn cleaned_file_round_trips(s in stream()) {
        let text = ingest::cleaned_to_string(&s).unwrap();
        prop_assert_eq!(ingest::cleaned_from_str(&text).unwrap(), s);
    }

    #[test]
    fn record_invariants(doc in document()) {
        let rules = CleanupRules::default();
        let s = mark_structure(&doc, &rules);
        let built = build_matrix(&s, &rules);
        let words: Vec<&String> = s.iter().filter_map(|t| match t {
            MarkedToken::Word(w) => Some(w), _ => None
        }).collect();
        prop_assert_eq!(built.records.len(), words.len());
        for r in &built.records {
            prop_assert_eq!(r.charnum, oracle_strip(&r.word).chars().count());
            prop_assert_eq!(r.charnum, strip_word(&r.word, &rules).chars().count());
        }
        let eos = built.records.iter().filter(|r| r.eos == 1).count();
        let terminal = words.iter().filter(|w| w.contains(['.', '!', '?'])).count();
        prop_assert_eq!(eos, terminal);
        for pair in built.records.windows(2) {
            prop_assert!(pair[0].canto <= pair[1].canto);
            prop_assert!(pair[0].line <= pair[1].line);
        }
        let cantos = s.iter().filter(|t| **t == MarkedToken::Canto).count();
        let lines = s.iter().filter(|t| **t == MarkedToken::Line).count();
        if let Some(last) = built.records.last() {
            prop_assert!(last.canto <= cantos && last.line <= lines);
        }
        let text = matrix::matrix_to_string(&built.records).unwrap();
        prop_assert_eq!(matrix::matrix_from_str(&text).unwrap(), built.records);
    }

    #[test]
    fn id_maxima_equal_marker_counts(s in stream()) {
        let n = number_structure(&s);
        // a trailing marker has no word after it to carry its count
        let last_word = s.iter().rposition(|t| matches!(t, MarkedToken::Word(_)));
        if let Some(last) = last_word {
            let upto = &s[..=last];
            let cantos = upto.iter().filter(|t| **t == MarkedToken::Canto).count();
            let lines = upto.iter().filter(|t| **t == MarkedToken::Line).count();
            prop_assert_eq!(n.canto_ids.iter().copied().max().unwrap(), cantos);
            prop_assert_eq!(n.line_ids.iter().copied().max().unwrap(), lines);
        }
    }

    #[test]
    fn speech_flags_are_span_union(words in prop::collection::vec("[a-z\"]{1,5}", 0..60)) {
        let d = detect_speech(&words);
        for (i, &f) in d.flags.iter().enumerate() {
            let inside = d.spans.iter().any(|s| s.contains(i));
            prop_assert_eq!(f == 1, inside);
        }
        for pair in d.spans.windows(2) {
            prop_assert!(pair[0].end < pair[1].start);
        }
        let quotes: usize = words.iter().map(|w| w.matches('"').count()).sum();
        prop_assert_eq!(quotes % 2 == 1, !d.warnings.is_empty());
        for s in &d.spans {
            prop_assert!(words[s.start].contains('"') && words[s.end].contains('"')
                || s.end == words.len() - 1);
        }
    }

    #[test]
    fn matching_is_case_stable(word in "[a-zA-Z]{1,8}") {
        let dict = LexiconDictionary::parse("[a]\nab*\nthe\n[b]\nZ*\nhonor").unwrap();
        prop_assert_eq!(match_word(&word, &dict), match_word(&word.to_lowercase(), &dict));
    }

    #[test]
    fn analysis_columns(doc in document()) {
        let rules = CleanupRules::default();
        let dict = LexiconDictionary::parse("[a]\nth*\n[b]\nand\nof").unwrap();
        let records = build_matrix(&mark_structure(&doc, &rules), &rules).records;
        let rows = analyze(&records, &dict, &rules);
        for (i, (r, row)) in records.iter().zip(&rows).enumerate() {
            prop_assert_eq!(row.seg, i + 1);
            prop_assert_eq!((row.wc, row.wps), (1, 1.0));
            prop_assert_eq!(row.sixltr == 100.0, r.charnum >= 7);
            let max = row.category_scores.iter().copied().fold(0.0, f64::max);
            prop_assert_eq!(row.dic, max);
            prop_assert!(row.category_scores.iter().all(|&s| s == 0.0 || s == 100.0));
        }
    }
}
