//! By-word long-form (BWLF) corpus preparation.
//!
//! Raw text is cleaned into a stream of word tokens interleaved with
//! `[canto]` / `[line]` markers ([`ingest`]), turned into one record per
//! word ([`matrix`]), scored against open category dictionaries
//! ([`lexicon`]) or joined with an external per-word analysis table
//! ([`integrate`]), and any resulting column can be fed to categorical
//! recurrence quantification ([`recurrence`]).
//!
//! ```
//! use bwlf::{ingest, matrix, rules::CleanupRules};
//!
//! let rules = CleanupRules::default();
//! let stream = ingest::mark_structure("Who goes there?\nA friend.", &rules);
//! let built = matrix::build_matrix(&stream, &rules);
//! assert_eq!(built.records.len(), 5);
//! assert_eq!(built.records[2].word, "there?");
//! assert_eq!(built.records[2].eos, 1);
//! ```

pub mod cli;
pub mod error;
pub mod ingest;
pub mod integrate;
pub mod lexicon;
pub mod matrix;
pub mod recurrence;
pub mod rules;
mod util;

pub use error::{Error, Result, Warning};
pub use ingest::MarkedToken;
pub use lexicon::{AnalysisRow, LexiconDictionary};
pub use matrix::{BwlfRecord, SpeechSpan};
pub use recurrence::{RecurrencePlot, RqaMetrics};
pub use rules::CleanupRules;
