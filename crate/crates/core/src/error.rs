use std::fmt;
use std::io;
use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("invalid regular expression for `{key}`: {source}")]
    Pattern {
        key: &'static str,
        #[source]
        source: regex::Error,
    },

    #[error("dictionary line {line}: {message}")]
    Dictionary { line: usize, message: String },

    #[error("line {line}: expected {expected} fields, found {found}")]
    RaggedRow {
        line: usize,
        expected: usize,
        found: usize,
    },

    #[error("line {line}: column `{column}` has non-numeric value `{value}`")]
    NonNumeric {
        line: usize,
        column: String,
        value: String,
    },

    #[error("row count mismatch: {records} BWLF records but {rows} analysis rows")]
    RowCountMismatch { records: usize, rows: usize },

    #[error("malformed matrix: {0}")]
    Matrix(String),

    #[error("unknown column `{0}`")]
    UnknownColumn(String),

    #[error("recurrence analysis needs a non-empty sequence")]
    EmptySequence,

    #[error("minimum line length must be at least 2, got {0}")]
    InvalidLmin(usize),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

/// Non-fatal findings reported alongside a successful result.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Warning {
    /// Words seen before the first `[line]` marker were numbered line 0.
    WordsBeforeFirstLine { count: usize },
    /// Words seen before the first `[canto]` marker were numbered canto 0.
    WordsBeforeFirstCanto { count: usize },
    /// A token was nothing but quotes and terminal punctuation.
    EmptyAfterStrip { index: usize, word: String },
    /// The document has an odd number of quote characters; the last span
    /// was closed at the final word.
    UnbalancedQuotes { quotes: usize, opened_at: usize },
    /// Join verification found an identifier that differs from the word.
    IdentifierMismatch {
        row: usize,
        word: String,
        identifier: String,
    },
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Warning::WordsBeforeFirstLine { count } => {
                write!(f, "{count} word(s) precede the first [line] marker and were given line 0")
            }
            Warning::WordsBeforeFirstCanto { count } => {
                write!(f, "{count} word(s) precede the first [canto] marker and were given canto 0")
            }
            Warning::EmptyAfterStrip { index, word } => {
                write!(f, "word {} (`{word}`) is empty after stripping punctuation", index + 1)
            }
            Warning::UnbalancedQuotes { quotes, opened_at } => write!(
                f,
                "odd number of quote characters ({quotes}); speech opened at word {} runs to the end",
                opened_at + 1
            ),
            Warning::IdentifierMismatch {
                row,
                word,
                identifier,
            } => write!(f, "row {row}: identifier `{identifier}` does not match word `{word}`"),
        }
    }
}
