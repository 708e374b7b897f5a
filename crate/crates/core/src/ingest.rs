//! Text cleanup, word splitting and structural markers.

use std::fmt;
use std::path::Path;

use crate::error::Result;
use crate::rules::{CantoLinePolicy, CasePolicy, CleanupRules, HyphenPolicy, LinePolicy};
use crate::util;

pub const CANTO_MARKER: &str = "[canto]";
pub const LINE_MARKER: &str = "[line]";

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum MarkedToken {
    Word(String),
    Canto,
    Line,
}

impl MarkedToken {
    /// Spelling used in the cleaned token file.
    pub fn as_str(&self) -> &str {
        match self {
            MarkedToken::Word(w) => w,
            MarkedToken::Canto => CANTO_MARKER,
            MarkedToken::Line => LINE_MARKER,
        }
    }

    fn parse(field: &str) -> Self {
        match field {
            CANTO_MARKER => MarkedToken::Canto,
            LINE_MARKER => MarkedToken::Line,
            w => MarkedToken::Word(w.to_string()),
        }
    }
}

impl fmt::Display for MarkedToken {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

pub(crate) fn is_hyphen(c: char) -> bool {
    matches!(c, '-' | '\u{2010}' | '\u{2013}' | '\u{2014}')
}

/// Cleans one source line into word tokens.
///
/// Removable punctuation is deleted outright, hyphens become token
/// boundaries under [`HyphenPolicy::Split`], and terminal punctuation,
/// apostrophes and double quotes stay attached to their words. Tokens that
/// are empty or made only of dashes are dropped.
pub fn clean_line(line: &str, rules: &CleanupRules) -> Vec<String> {
    let kept: String = line
        .chars()
        .filter(|c| !rules.remove_chars.contains(c))
        .collect();
    let folded = match rules.case_policy {
        CasePolicy::Lower => kept.to_lowercase(),
        CasePolicy::Preserve => kept,
    };
    let split_hyphens = rules.hyphen_policy == HyphenPolicy::Split;
    folded
        .split(|c: char| c.is_whitespace() || (split_hyphens && is_hyphen(c)))
        .filter(|t| !t.is_empty() && !t.chars().all(is_hyphen))
        .map(str::to_string)
        .collect()
}

/// Cleans a whole document and interleaves canto and line markers.
pub fn mark_structure(document: &str, rules: &CleanupRules) -> Vec<MarkedToken> {
    let mut out = Vec::new();
    for raw in document.lines() {
        let raw = raw.trim_end_matches('\r');
        if rules
            .canto_pattern
            .as_ref()
            .is_some_and(|p| p.is_match(raw))
        {
            out.push(MarkedToken::Canto);
            if rules.canto_line == CantoLinePolicy::Consume {
                continue;
            }
        }
        let words = clean_line(raw, rules);
        if words.is_empty() {
            continue;
        }
        let starts_line = match rules.line_policy {
            LinePolicy::EverySourceLine => true,
            LinePolicy::Pattern => rules.line_pattern.as_ref().is_some_and(|p| p.is_match(raw)),
        };
        if starts_line {
            out.push(MarkedToken::Line);
        }
        out.extend(words.into_iter().map(MarkedToken::Word));
    }
    out
}

/// Serializes a marked stream as one token per record.
pub fn cleaned_to_string(stream: &[MarkedToken]) -> Result<String> {
    let bytes = util::csv_bytes(b',', |w| {
        for token in stream {
            w.write_record([token.as_str()])?;
        }
        Ok(())
    })?;
    Ok(String::from_utf8(bytes).expect("tokens are valid UTF-8"))
}

/// Parses a cleaned token file. Every field of every record is one token,
/// so both one-per-line and comma-joined layouts load.
pub fn cleaned_from_str(text: &str) -> Result<Vec<MarkedToken>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut out = Vec::new();
    for record in reader.records() {
        out.extend(
            record?
                .iter()
                .filter(|f| !f.is_empty())
                .map(MarkedToken::parse),
        );
    }
    Ok(out)
}

pub fn write_cleaned(stream: &[MarkedToken], path: &Path) -> Result<()> {
    util::write_atomic(path, cleaned_to_string(stream)?.as_bytes())
}

pub fn read_cleaned(path: &Path) -> Result<Vec<MarkedToken>> {
    cleaned_from_str(&util::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use MarkedToken::{Canto, Line};

    fn w(s: &str) -> MarkedToken {
        MarkedToken::Word(s.into())
    }

    fn words(line: &str) -> Vec<String> {
        clean_line(line, &CleanupRules::default())
    }

    #[test]
    fn first_verse_line() {
        assert_eq!(
            words("LO, praise of the prowess of people-kings"),
            ["lo", "praise", "of", "the", "prowess", "of", "people", "kings"]
        );
    }

    #[test]
    fn colon_and_commas_removed() {
        assert_eq!(
            words("friendless, a foundling, fate repaid him:"),
            ["friendless", "a", "foundling", "fate", "repaid", "him"]
        );
    }

    #[test]
    fn terminal_punctuation_kept() {
        let got = words("we have heard, and what honor the athelings won!");
        assert_eq!(got.last().unwrap(), "won!");
        assert_eq!(got.len(), 9);
    }

    #[test]
    fn empty_and_dash_only() {
        assert!(words("").is_empty());
        assert!(words("   ").is_empty());
        assert!(words(" - -- \u{2014} ").is_empty());
    }

    #[test]
    fn apostrophes_quotes_and_ellipses_survive() {
        assert_eq!(
            words("no hero 'neath heaven, - who harbored that"),
            ["no", "hero", "'neath", "heaven", "who", "harbored", "that"]
        );
        assert_eq!(words("\"Who are ye,"), ["\"who", "are", "ye"]);
        assert_eq!(
            words("who long had ruled...."),
            ["who", "long", "had", "ruled...."]
        );
        assert_eq!(words("unlocked:-"), ["unlocked"]);
    }

    #[test]
    fn keep_and_preserve_policies() {
        let rules = CleanupRules {
            hyphen_policy: HyphenPolicy::Keep,
            case_policy: CasePolicy::Preserve,
            ..CleanupRules::default()
        };
        assert_eq!(
            clean_line("People-kings - ok", &rules),
            ["People-kings", "ok"]
        );
    }

    #[test]
    fn every_source_line_markers() {
        let got = mark_structure("ab cd\nef", &CleanupRules::default());
        assert_eq!(got, [Line, w("ab"), w("cd"), Line, w("ef")]);
    }

    #[test]
    fn blank_lines_get_no_marker() {
        let got = mark_structure("ab\n\n  \n - \ncd", &CleanupRules::default());
        assert_eq!(got, [Line, w("ab"), Line, w("cd")]);
    }

    #[test]
    fn canto_heading_consumed() {
        let rules = CleanupRules::default()
            .with_canto_pattern(r"^CANTO")
            .unwrap();
        let got = mark_structure("CANTO I\nab\nCANTO II\ncd", &rules);
        assert_eq!(got, [Canto, Line, w("ab"), Canto, Line, w("cd")]);
    }

    #[test]
    fn canto_line_kept() {
        let mut rules = CleanupRules::default()
            .with_canto_pattern(r"^[A-Z]{2,}\b")
            .unwrap();
        rules.canto_line = CantoLinePolicy::Keep;
        let got = mark_structure("LO, praise\nof Danes", &rules);
        assert_eq!(
            got,
            [Canto, Line, w("lo"), w("praise"), Line, w("of"), w("danes")]
        );
    }

    #[test]
    fn pattern_policy_joins_wrapped_lines() {
        let rules = CleanupRules::default()
            .with_line_pattern(r"\S\s+\S")
            .unwrap();
        let got = mark_structure("what honor the athelings\nwon!\n\nOft Scyld", &rules);
        assert_eq!(
            got,
            [
                Line,
                w("what"),
                w("honor"),
                w("the"),
                w("athelings"),
                w("won!"),
                Line,
                w("oft"),
                w("scyld"),
            ]
        );
    }

    #[test]
    fn empty_document() {
        assert!(mark_structure("", &CleanupRules::default()).is_empty());
    }

    #[test]
    fn cleaned_format() {
        assert_eq!(cleaned_to_string(&[Line, w("lo")]).unwrap(), "[line]\nlo\n");
        assert_eq!(cleaned_to_string(&[]).unwrap(), "");
        assert_eq!(
            cleaned_from_str("[canto],[line],a\nb\n").unwrap(),
            [Canto, Line, w("a"), w("b")]
        );
    }

    #[test]
    fn write_read_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cleaned.csv");
        let stream = vec![Canto, Line, w("\"who"), w("ye\""), w("a,b")];
        write_cleaned(&stream, &path).unwrap();
        assert_eq!(read_cleaned(&path).unwrap(), stream);
    }

    #[test]
    fn unwritable_path_errors() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("missing/sub/cleaned.csv");
        assert!(write_cleaned(&[Line], &path).is_err());
    }
}
