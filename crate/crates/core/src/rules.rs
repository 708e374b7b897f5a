//! Cleanup configuration shared by the ingest and matrix stages.
//!
//! A rules file is flat `key = value` TOML whose keys mirror the fields of
//! [`CleanupRules`]:
//!
//! ```toml
//! remove_chars  = ",:;"
//! keep_terminal = ".?!"
//! hyphen_policy = "split"             # or "keep"
//! case_policy   = "lower"             # or "preserve"
//! canto_pattern = '^[A-Z]{2,}\b'      # optional
//! canto_line    = "keep"              # or "consume" (default)
//! line_policy   = "pattern"           # or "every_source_line" (default)
//! line_pattern  = '\S\s+\S'           # required when line_policy = "pattern"
//! ```
//!
//! Unknown keys are rejected.

use std::collections::BTreeSet;
use std::path::Path;

use regex::Regex;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::util;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HyphenPolicy {
    /// Hyphens act as token boundaries: `people-kings` → `people`, `kings`.
    #[default]
    Split,
    Keep,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CasePolicy {
    #[default]
    Lower,
    Preserve,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LinePolicy {
    /// Every source line that yields words starts a new poem line.
    #[default]
    EverySourceLine,
    /// Only source lines matching `line_pattern` start a new poem line; the
    /// others continue the previous one (wrapped verse).
    Pattern,
}

/// What happens to a source line that matches `canto_pattern`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CantoLinePolicy {
    /// The line is a heading: it emits a canto marker and nothing else.
    #[default]
    Consume,
    /// The line opens the canto and is tokenized like any other line.
    Keep,
}

#[derive(Debug, Clone)]
pub struct CleanupRules {
    pub remove_chars: BTreeSet<char>,
    pub keep_terminal: BTreeSet<char>,
    pub hyphen_policy: HyphenPolicy,
    pub case_policy: CasePolicy,
    pub canto_pattern: Option<Regex>,
    pub canto_line: CantoLinePolicy,
    pub line_policy: LinePolicy,
    pub line_pattern: Option<Regex>,
}

impl Default for CleanupRules {
    fn default() -> Self {
        CleanupRules {
            remove_chars: [',', ':', ';'].into_iter().collect(),
            keep_terminal: ['.', '?', '!'].into_iter().collect(),
            hyphen_policy: HyphenPolicy::Split,
            case_policy: CasePolicy::Lower,
            canto_pattern: None,
            canto_line: CantoLinePolicy::Consume,
            line_policy: LinePolicy::EverySourceLine,
            line_pattern: None,
        }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RulesFile {
    remove_chars: Option<String>,
    keep_terminal: Option<String>,
    hyphen_policy: Option<HyphenPolicy>,
    case_policy: Option<CasePolicy>,
    canto_pattern: Option<String>,
    canto_line: Option<CantoLinePolicy>,
    line_policy: Option<LinePolicy>,
    line_pattern: Option<String>,
}

impl CleanupRules {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let file: RulesFile =
            toml::from_str(text).map_err(|e| Error::Config(e.message().to_string()))?;
        let defaults = CleanupRules::default();
        let rules = CleanupRules {
            remove_chars: file
                .remove_chars
                .map(|s| s.chars().collect())
                .unwrap_or(defaults.remove_chars),
            keep_terminal: file
                .keep_terminal
                .map(|s| s.chars().collect())
                .unwrap_or(defaults.keep_terminal),
            hyphen_policy: file.hyphen_policy.unwrap_or_default(),
            case_policy: file.case_policy.unwrap_or_default(),
            canto_pattern: file
                .canto_pattern
                .as_deref()
                .map(|p| compile("canto_pattern", p))
                .transpose()?,
            canto_line: file.canto_line.unwrap_or_default(),
            line_policy: file.line_policy.unwrap_or_default(),
            line_pattern: file
                .line_pattern
                .as_deref()
                .map(|p| compile("line_pattern", p))
                .transpose()?,
        };
        rules.validate()?;
        Ok(rules)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = util::read_to_string(path)?;
        Self::from_toml_str(&text).map_err(|e| match e {
            Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn with_canto_pattern(mut self, pattern: &str) -> Result<Self> {
        self.canto_pattern = Some(compile("canto_pattern", pattern)?);
        Ok(self)
    }

    pub fn with_line_pattern(mut self, pattern: &str) -> Result<Self> {
        self.line_policy = LinePolicy::Pattern;
        self.line_pattern = Some(compile("line_pattern", pattern)?);
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(c) = self.remove_chars.intersection(&self.keep_terminal).next() {
            return Err(Error::Config(format!(
                "`{c}` is listed in both remove_chars and keep_terminal"
            )));
        }
        if let Some(c) = self
            .remove_chars
            .iter()
            .chain(&self.keep_terminal)
            .find(|c| c.is_whitespace())
        {
            return Err(Error::Config(format!(
                "whitespace {c:?} cannot be a punctuation rule"
            )));
        }
        if self.line_policy == LinePolicy::Pattern && self.line_pattern.is_none() {
            return Err(Error::Config(
                "line_policy = \"pattern\" requires line_pattern".into(),
            ));
        }
        Ok(())
    }

    pub fn is_terminal(&self, c: char) -> bool {
        self.keep_terminal.contains(&c)
    }
}

fn compile(key: &'static str, pattern: &str) -> Result<Regex> {
    Regex::new(pattern).map_err(|source| Error::Pattern { key, source })
}
