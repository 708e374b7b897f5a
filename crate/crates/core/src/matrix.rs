//! Marked token stream → by-word long-form records.
//!
//! Each word becomes one [`BwlfRecord`] carrying the canto and poem line it
//! belongs to, its letter count, whether it sits inside quoted speech and
//! whether it closes a sentence. Line numbering is global: it does not
//! restart at a canto boundary.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, Warning};
use crate::ingest::MarkedToken;
use crate::rules::CleanupRules;
use crate::util;

pub const MATRIX_HEADER: [&str; 6] = ["canto", "line", "word", "charnum", "speech", "eos"];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BwlfRecord {
    pub canto: usize,
    pub line: usize,
    pub word: String,
    pub charnum: usize,
    pub speech: u8,
    pub eos: u8,
}

impl BwlfRecord {
    pub fn fields(&self) -> [String; 6] {
        [
            self.canto.to_string(),
            self.line.to_string(),
            self.word.clone(),
            self.charnum.to_string(),
            self.speech.to_string(),
            self.eos.to_string(),
        ]
    }

    /// Value of one of the six matrix columns, by header name.
    pub fn column(&self, name: &str) -> Option<String> {
        let idx = MATRIX_HEADER.iter().position(|h| *h == name)?;
        Some(self.fields()[idx].clone())
    }
}

/// Inclusive range of word indices (0-based) inside one quotation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpeechSpan {
    pub start: usize,
    pub end: usize,
}

impl SpeechSpan {
    pub fn contains(&self, index: usize) -> bool {
        self.start <= index && index <= self.end
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NumberedWords {
    pub words: Vec<String>,
    pub canto_ids: Vec<usize>,
    pub line_ids: Vec<usize>,
    pub warnings: Vec<Warning>,
}

/// Drops the markers and gives every word the number of canto and line
/// markers seen so far.
pub fn number_structure(stream: &[MarkedToken]) -> NumberedWords {
    let mut out = NumberedWords::default();
    let (mut canto, mut line) = (0, 0);
    for token in stream {
        match token {
            MarkedToken::Canto => canto += 1,
            MarkedToken::Line => line += 1,
            MarkedToken::Word(w) => {
                out.words.push(w.clone());
                out.canto_ids.push(canto);
                out.line_ids.push(line);
            }
        }
    }
    let before_line = out.line_ids.iter().take_while(|&&l| l == 0).count();
    if before_line > 0 {
        out.warnings
            .push(Warning::WordsBeforeFirstLine { count: before_line });
    }
    let before_canto = out.canto_ids.iter().take_while(|&&c| c == 0).count();
    if before_canto > 0 {
        out.warnings.push(Warning::WordsBeforeFirstCanto {
            count: before_canto,
        });
    }
    out
}

pub fn is_quote(c: char) -> bool {
    matches!(c, '"' | '\u{201C}' | '\u{201D}')
}

pub fn detect_eos(word: &str, rules: &CleanupRules) -> u8 {
    u8::from(word.chars().any(|c| rules.is_terminal(c)))
}

/// Removes every double quote, then the trailing run of terminal
/// punctuation. Apostrophes stay.
pub fn strip_word(word: &str, rules: &CleanupRules) -> String {
    let unquoted: String = word.chars().filter(|&c| !is_quote(c)).collect();
    unquoted
        .trim_end_matches(|c| rules.is_terminal(c))
        .to_string()
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SpeechDetection {
    pub flags: Vec<u8>,
    pub spans: Vec<SpeechSpan>,
    pub warnings: Vec<Warning>,
}

/// Pairs quote characters across the word sequence: the 1st and 2nd quote
/// bound the first span, the 3rd and 4th the next, and so on.
pub fn detect_speech<S: AsRef<str>>(words: &[S]) -> SpeechDetection {
    let mut spans: Vec<SpeechSpan> = Vec::new();
    let mut open: Option<usize> = None;
    let mut quotes = 0;
    for (i, word) in words.iter().enumerate() {
        for _ in word.as_ref().chars().filter(|&c| is_quote(c)) {
            quotes += 1;
            match open.take() {
                None => open = Some(i),
                Some(start) => match spans.last_mut() {
                    // a token that closes one quote and opens the next
                    Some(prev) if prev.end == start => prev.end = i,
                    _ => spans.push(SpeechSpan { start, end: i }),
                },
            }
        }
    }
    let mut warnings = Vec::new();
    if let Some(start) = open {
        warnings.push(Warning::UnbalancedQuotes {
            quotes,
            opened_at: start,
        });
        let end = words.len() - 1;
        match spans.last_mut() {
            Some(prev) if prev.end == start => prev.end = end,
            _ => spans.push(SpeechSpan { start, end }),
        }
    }
    let mut flags = vec![0u8; words.len()];
    for span in &spans {
        flags[span.start..=span.end].fill(1);
    }
    SpeechDetection {
        flags,
        spans,
        warnings,
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BuiltMatrix {
    pub records: Vec<BwlfRecord>,
    pub speech_spans: Vec<SpeechSpan>,
    pub warnings: Vec<Warning>,
}

pub fn build_matrix(stream: &[MarkedToken], rules: &CleanupRules) -> BuiltMatrix {
    let numbered = number_structure(stream);
    let speech = detect_speech(&numbered.words);
    let mut warnings = numbered.warnings;
    let mut records = Vec::with_capacity(numbered.words.len());
    for (i, word) in numbered.words.into_iter().enumerate() {
        let stripped = strip_word(&word, rules);
        if stripped.is_empty() {
            warnings.push(Warning::EmptyAfterStrip {
                index: i,
                word: word.clone(),
            });
        }
        records.push(BwlfRecord {
            canto: numbered.canto_ids[i],
            line: numbered.line_ids[i],
            charnum: stripped.chars().count(),
            speech: speech.flags[i],
            eos: detect_eos(&word, rules),
            word,
        });
    }
    warnings.extend(speech.warnings);
    BuiltMatrix {
        records,
        speech_spans: speech.spans,
        warnings,
    }
}

pub fn matrix_to_string(records: &[BwlfRecord]) -> Result<String> {
    let bytes = util::csv_bytes(b',', |w| {
        w.write_record(MATRIX_HEADER)?;
        for r in records {
            w.write_record(r.fields())?;
        }
        Ok(())
    })?;
    Ok(String::from_utf8(bytes).expect("records are valid UTF-8"))
}

pub fn matrix_from_str(text: &str) -> Result<Vec<BwlfRecord>> {
    let mut reader = csv::ReaderBuilder::new().from_reader(text.as_bytes());
    let header = reader.headers()?.clone();
    if header.len() < MATRIX_HEADER.len() || header.iter().zip(MATRIX_HEADER).any(|(a, b)| a != b) {
        return Err(Error::Matrix(format!(
            "header must start with `{}`",
            MATRIX_HEADER.join(",")
        )));
    }
    let mut records = Vec::new();
    for (row, rec) in reader.records().enumerate() {
        let rec = rec?;
        let line = row + 2;
        let int = |idx: usize| -> Result<usize> {
            rec[idx].parse().map_err(|_| Error::NonNumeric {
                line,
                column: MATRIX_HEADER[idx].to_string(),
                value: rec[idx].to_string(),
            })
        };
        let bit = |idx: usize| -> Result<u8> {
            match int(idx)? {
                b @ (0 | 1) => Ok(b as u8),
                other => Err(Error::Matrix(format!(
                    "line {line}: `{}` must be 0 or 1, got {other}",
                    MATRIX_HEADER[idx]
                ))),
            }
        };
        records.push(BwlfRecord {
            canto: int(0)?,
            line: int(1)?,
            word: rec[2].to_string(),
            charnum: int(3)?,
            speech: bit(4)?,
            eos: bit(5)?,
        });
    }
    Ok(records)
}

pub fn export_matrix(records: &[BwlfRecord], path: &Path) -> Result<()> {
    util::write_atomic(path, matrix_to_string(records)?.as_bytes())
}

pub fn import_matrix(path: &Path) -> Result<Vec<BwlfRecord>> {
    matrix_from_str(&util::read_to_string(path)?)
}

pub fn wordlist_to_string(records: &[BwlfRecord]) -> String {
    records.iter().map(|r| format!("{}\n", r.word)).collect()
}

/// One word per line, for external per-word analyzers.
pub fn export_wordlist(records: &[BwlfRecord], path: &Path) -> Result<()> {
    util::write_atomic(path, wordlist_to_string(records).as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;
    use MarkedToken::{Canto, Line};

    fn w(s: &str) -> MarkedToken {
        MarkedToken::Word(s.into())
    }

    fn rules() -> CleanupRules {
        CleanupRules::default()
    }

    #[test]
    fn counters_are_global() {
        let n = number_structure(&[Canto, Line, w("a"), Canto, Line, w("b")]);
        assert_eq!(n.words, ["a", "b"]);
        assert_eq!(n.canto_ids, [1, 2]);
        assert_eq!(n.line_ids, [1, 2]);
        assert!(n.warnings.is_empty());
    }

    #[test]
    fn no_markers_warns() {
        let n = number_structure(&[w("a"), w("b")]);
        assert_eq!(n.canto_ids, [0, 0]);
        assert_eq!(n.line_ids, [0, 0]);
        assert_eq!(
            n.warnings,
            [
                Warning::WordsBeforeFirstLine { count: 2 },
                Warning::WordsBeforeFirstCanto { count: 2 }
            ]
        );
    }

    #[test]
    fn eos_detection() {
        assert_eq!(detect_eos("won!", &rules()), 1);
        assert_eq!(detect_eos("sped", &rules()), 0);
        assert_eq!(detect_eos("ruled....", &rules()), 1);
        assert_eq!(detect_eos("o'er", &rules()), 0);
    }

    #[test]
    fn stripping() {
        assert_eq!(strip_word("won!", &rules()), "won");
        assert_eq!(strip_word("athelings", &rules()), "athelings");
        assert_eq!(strip_word("\"who", &rules()), "who");
        assert_eq!(strip_word("came.\"", &rules()), "came");
        assert_eq!(strip_word("ruled....", &rules()), "ruled");
        assert_eq!(strip_word("o'er", &rules()), "o'er");
        assert_eq!(strip_word("?!", &rules()), "");
    }

    #[test]
    fn speech_pairs_across_tokens() {
        let s = detect_speech(&["\"who", "are", "ye\"", "then"]);
        assert_eq!(s.flags, [1, 1, 1, 0]);
        assert_eq!(s.spans, [SpeechSpan { start: 0, end: 2 }]);
        assert!(s.warnings.is_empty());
    }

    #[test]
    fn doubly_quoted_token_is_one_span() {
        let s = detect_speech(&["he", "said", "\"no!\"", "then", "\"go", "home\""]);
        assert_eq!(s.flags, [0, 0, 1, 0, 1, 1]);
        assert_eq!(
            s.spans,
            [
                SpeechSpan { start: 2, end: 2 },
                SpeechSpan { start: 4, end: 5 }
            ]
        );
    }

    #[test]
    fn close_and_reopen_in_one_token_merges() {
        let s = detect_speech(&["\"a", "b\"\"c", "d\""]);
        assert_eq!(s.spans, [SpeechSpan { start: 0, end: 2 }]);
        assert_eq!(s.flags, [1, 1, 1]);
    }

    #[test]
    fn unbalanced_quote_runs_to_end() {
        let s = detect_speech(&["a", "\"b", "c", "d"]);
        assert_eq!(s.flags, [0, 1, 1, 1]);
        assert_eq!(
            s.warnings,
            [Warning::UnbalancedQuotes {
                quotes: 1,
                opened_at: 1
            }]
        );
    }

    #[test]
    fn no_quotes() {
        let s = detect_speech(&["a", "b"]);
        assert_eq!(s.flags, [0, 0]);
        assert!(s.spans.is_empty());
        assert!(detect_speech::<&str>(&[]).flags.is_empty());
    }

    #[test]
    fn build_composes() {
        let stream = [
            Canto,
            Line,
            w("lo"),
            w("praise"),
            Line,
            w("\"who"),
            w("won!\""),
        ];
        let built = build_matrix(&stream, &rules());
        let r = &built.records;
        assert_eq!(
            r[0],
            BwlfRecord {
                canto: 1,
                line: 1,
                word: "lo".into(),
                charnum: 2,
                speech: 0,
                eos: 0
            }
        );
        assert_eq!(
            (r[2].line, r[2].charnum, r[2].speech, r[2].eos),
            (2, 3, 1, 0)
        );
        assert_eq!((r[3].charnum, r[3].speech, r[3].eos), (3, 1, 1));
        assert!(built.warnings.is_empty());
        assert!(build_matrix(&[], &rules()).records.is_empty());
    }

    #[test]
    fn empty_after_strip_is_kept_with_warning() {
        let built = build_matrix(&[Canto, Line, w("a"), w("?")], &rules());
        assert_eq!(built.records[1].charnum, 0);
        assert!(matches!(
            built.warnings[..],
            [Warning::EmptyAfterStrip { index: 1, .. }]
        ));
    }

    #[test]
    fn export_formats() {
        assert_eq!(
            matrix_to_string(&[]).unwrap(),
            "canto,line,word,charnum,speech,eos\n"
        );
        let built = build_matrix(&[Canto, Line, w("\"who"), w("a,b")], &rules());
        let text = matrix_to_string(&built.records).unwrap();
        assert_eq!(
            text,
            "canto,line,word,charnum,speech,eos\n1,1,\"\"\"who\",3,1,0\n1,1,\"a,b\",3,1,0\n"
        );
        assert_eq!(matrix_from_str(&text).unwrap(), built.records);
        assert_eq!(wordlist_to_string(&built.records), "\"who\na,b\n");
        assert_eq!(wordlist_to_string(&[]), "");
    }

    #[test]
    fn import_rejects_bad_input() {
        assert!(matrix_from_str("a,b,c\n").is_err());
        assert!(matrix_from_str("canto,line,word,charnum,speech,eos\nx,1,a,1,0,0\n").is_err());
        assert!(matrix_from_str("canto,line,word,charnum,speech,eos\n1,1,a,1,2,0\n").is_err());
    }

    #[test]
    fn column_lookup() {
        let r = BwlfRecord {
            canto: 2,
            line: 7,
            word: "x".into(),
            charnum: 1,
            speech: 0,
            eos: 1,
        };
        assert_eq!(r.column("line").as_deref(), Some("7"));
        assert_eq!(r.column("eos").as_deref(), Some("1"));
        assert_eq!(r.column("nope"), None);
    }
}
