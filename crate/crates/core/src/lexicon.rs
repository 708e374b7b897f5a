//! Open category dictionaries and the per-word analysis columns.
//!
//! Dictionary files are plain text:
//!
//! ```text
//! # comments and blank lines are ignored
//! [posemo]
//! prais*
//! honor
//! [kin]
//! father
//! son*
//! ```
//!
//! An entry ending in `*` matches any word it is a prefix of; every other
//! entry must match the whole word. Matching is case-insensitive.
//!
//! Because every segment handed to the analyzer is a single word, the
//! percentage columns collapse to 0 or 100.

use std::collections::HashSet;
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{strip_word, BwlfRecord};
use crate::rules::CleanupRules;
use crate::util;

/// Words longer than six letters count towards `Sixltr`.
pub const SIXLTR_MIN_CHARS: usize = 7;

pub const ANALYSIS_FIXED_HEADER: [&str; 5] = ["Seg", "WC", "WPS", "Sixltr", "Dic"];
pub const IDENTIFIER_HEADER: &str = "Filename";

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Pattern {
    Literal(String),
    Stem(String),
}

impl Pattern {
    fn parse(entry: &str, line: usize) -> Result<Self> {
        let malformed = |message: &str| Error::Dictionary {
            line,
            message: format!("{message}: `{entry}`"),
        };
        if entry.chars().any(char::is_whitespace) {
            return Err(malformed("entry contains whitespace"));
        }
        let lower = entry.to_lowercase();
        match lower.strip_suffix('*') {
            Some("") => Err(malformed("lone wildcard")),
            Some(stem) if stem.contains('*') => {
                Err(malformed("wildcard is only allowed at the end"))
            }
            Some(stem) => Ok(Pattern::Stem(stem.to_string())),
            None if lower.contains('*') => Err(malformed("wildcard is only allowed at the end")),
            None => Ok(Pattern::Literal(lower)),
        }
    }

    pub fn matches(&self, word: &str) -> bool {
        match self {
            Pattern::Literal(lit) => lit == word,
            Pattern::Stem(stem) => word.starts_with(stem.as_str()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Category {
    pub name: String,
    pub patterns: Vec<Pattern>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LexiconDictionary {
    categories: Vec<Category>,
}

impl LexiconDictionary {
    pub fn parse(text: &str) -> Result<Self> {
        let mut categories: Vec<Category> = Vec::new();
        let mut seen = HashSet::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let entry = raw.trim();
            if entry.is_empty() || entry.starts_with('#') {
                continue;
            }
            if let Some(name) = entry.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
                let name = name.trim();
                if name.is_empty() {
                    return Err(Error::Dictionary {
                        line,
                        message: "empty category name".into(),
                    });
                }
                if !seen.insert(name.to_string()) {
                    return Err(Error::Dictionary {
                        line,
                        message: format!("duplicate category `{name}`"),
                    });
                }
                categories.push(Category {
                    name: name.to_string(),
                    patterns: Vec::new(),
                });
                continue;
            }
            let pattern = Pattern::parse(entry, line)?;
            match categories.last_mut() {
                Some(cat) => cat.patterns.push(pattern),
                None => {
                    return Err(Error::Dictionary {
                        line,
                        message: format!("entry `{entry}` appears before any [category] header"),
                    })
                }
            }
        }
        Ok(LexiconDictionary { categories })
    }

    pub fn categories(&self) -> &[Category] {
        &self.categories
    }

    pub fn category_names(&self) -> impl Iterator<Item = &str> {
        self.categories.iter().map(|c| c.name.as_str())
    }

    pub fn is_empty(&self) -> bool {
        self.categories.is_empty()
    }
}

pub fn load_dictionary(path: &Path) -> Result<LexiconDictionary> {
    LexiconDictionary::parse(&util::read_to_string(path)?)
}

/// One bit per category, in dictionary order.
pub fn match_word(stripped: &str, dict: &LexiconDictionary) -> Vec<bool> {
    let word = stripped.to_lowercase();
    dict.categories
        .iter()
        .map(|cat| cat.patterns.iter().any(|p| p.matches(&word)))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisRow {
    pub seg: usize,
    pub wc: u32,
    pub wps: f64,
    pub sixltr: f64,
    pub dic: f64,
    pub category_scores: Vec<f64>,
}

fn pct(bit: bool) -> f64 {
    if bit {
        100.0
    } else {
        0.0
    }
}

pub fn analyze(
    records: &[BwlfRecord],
    dict: &LexiconDictionary,
    rules: &CleanupRules,
) -> Vec<AnalysisRow> {
    records
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let bits = match_word(&strip_word(&r.word, rules), dict);
            AnalysisRow {
                seg: i + 1,
                wc: 1,
                wps: 1.0,
                sixltr: pct(r.charnum >= SIXLTR_MIN_CHARS),
                dic: pct(bits.iter().any(|&b| b)),
                category_scores: bits.into_iter().map(pct).collect(),
            }
        })
        .collect()
}

/// Tab-delimited analysis table laid out like LIWC output, with the word
/// as the row identifier.
pub fn analysis_to_string(
    records: &[BwlfRecord],
    rows: &[AnalysisRow],
    dict: &LexiconDictionary,
) -> Result<String> {
    let bytes = util::csv_bytes(b'\t', |w| {
        let header = std::iter::once(IDENTIFIER_HEADER)
            .chain(ANALYSIS_FIXED_HEADER)
            .chain(dict.category_names());
        w.write_record(header)?;
        for (record, row) in records.iter().zip(rows) {
            let fixed = [
                row.seg.to_string(),
                row.wc.to_string(),
                row.wps.to_string(),
                row.sixltr.to_string(),
                row.dic.to_string(),
            ];
            let fields = std::iter::once(record.word.clone())
                .chain(fixed)
                .chain(row.category_scores.iter().map(f64::to_string));
            w.write_record(fields)?;
        }
        Ok(())
    })?;
    Ok(String::from_utf8(bytes).expect("analysis output is valid UTF-8"))
}

pub fn export_analysis(
    records: &[BwlfRecord],
    rows: &[AnalysisRow],
    dict: &LexiconDictionary,
    path: &Path,
) -> Result<()> {
    util::write_atomic(path, analysis_to_string(records, rows, dict)?.as_bytes())
}
