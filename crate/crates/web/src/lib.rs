//! Browser front end for the bwlf toolkit.
//!
//! Each exported function takes the text, rules and dictionary as strings
//! and returns JSON for `www/index.js` to render. The work is done by the
//! `*_json` functions below, which are plain Rust and tested natively.

use bwlf::integrate::{self, Delimiter};
use bwlf::lexicon::{self, LexiconDictionary};
use bwlf::matrix::{self, BwlfRecord, SpeechSpan};
use bwlf::recurrence::{self, RqaMetrics};
use bwlf::{ingest, CleanupRules};
use serde::Serialize;
use wasm_bindgen::prelude::*;

const SAMPLE_TEXT: &str = include_str!("../../core/data/beowulf.txt");
const SAMPLE_RULES: &str = include_str!("../../core/data/beowulf.rules");
const SAMPLE_DICT: &str = include_str!("../../core/data/base.dict");

#[derive(Serialize)]
struct MatrixView {
    records: Vec<BwlfRecord>,
    spans: Vec<SpeechSpan>,
    warnings: Vec<String>,
    csv: String,
}

#[derive(Serialize)]
struct RecurrenceView {
    column: String,
    n: usize,
    labels: Vec<u32>,
    values: Vec<String>,
    metrics: RqaMetrics,
    columns: Vec<String>,
}

#[derive(Serialize)]
struct ScoredWord {
    word: String,
    sixltr: f64,
    dic: f64,
    scores: Vec<f64>,
}

#[derive(Serialize)]
struct LexiconView {
    categories: Vec<String>,
    words: Vec<ScoredWord>,
    /// Share of words hitting each category, in percent.
    totals: Vec<f64>,
    dic_total: f64,
}

fn rules_from(text: &str) -> Result<CleanupRules, String> {
    CleanupRules::from_toml_str(text).map_err(|e| e.to_string())
}

fn build(text: &str, rules: &CleanupRules) -> matrix::BuiltMatrix {
    matrix::build_matrix(&ingest::mark_structure(text, rules), rules)
}

fn to_json<T: Serialize>(value: &T) -> Result<String, String> {
    serde_json::to_string(value).map_err(|e| e.to_string())
}

pub fn matrix_json(text: &str, rules: &str) -> Result<String, String> {
    let rules = rules_from(rules)?;
    let built = build(text, &rules);
    let csv = matrix::matrix_to_string(&built.records).map_err(|e| e.to_string())?;
    to_json(&MatrixView {
        warnings: built.warnings.iter().map(ToString::to_string).collect(),
        records: built.records,
        spans: built.speech_spans,
        csv,
    })
}

pub fn recurrence_json(
    text: &str,
    rules: &str,
    dict: &str,
    column: &str,
    lmin: usize,
) -> Result<String, String> {
    let rules = rules_from(rules)?;
    let dict = LexiconDictionary::parse(dict).map_err(|e| e.to_string())?;
    let records = build(text, &rules).records;
    let rows = lexicon::analyze(&records, &dict, &rules);
    let analysis =
        lexicon::analysis_to_string(&records, &rows, &dict).map_err(|e| e.to_string())?;
    let table =
        integrate::external_from_str(&analysis, Delimiter::Tab).map_err(|e| e.to_string())?;
    let joined = integrate::join_rows(&records, &table).map_err(|e| e.to_string())?;
    let integrated = integrate::integrated_to_string(&joined).map_err(|e| e.to_string())?;

    let values = recurrence::column_from_str(&integrated, b',', column, &rules)
        .map_err(|e| e.to_string())?;
    let plot = recurrence::recurrence_matrix(&values, column).map_err(|e| e.to_string())?;
    let metrics = recurrence::rqa(&plot, lmin).map_err(|e| e.to_string())?;
    to_json(&RecurrenceView {
        column: column.to_string(),
        n: plot.n(),
        labels: plot.labels().to_vec(),
        values,
        metrics,
        columns: joined.header,
    })
}

pub fn lexicon_json(text: &str, rules: &str, dict: &str) -> Result<String, String> {
    let rules = rules_from(rules)?;
    let dict = LexiconDictionary::parse(dict).map_err(|e| e.to_string())?;
    let records = build(text, &rules).records;
    let rows = lexicon::analyze(&records, &dict, &rules);
    let n = rows.len().max(1) as f64;
    let categories: Vec<String> = dict.category_names().map(str::to_string).collect();
    let totals = (0..categories.len())
        .map(|c| rows.iter().map(|r| r.category_scores[c]).sum::<f64>() / n)
        .collect();
    let dic_total = rows.iter().map(|r| r.dic).sum::<f64>() / n;
    let words = records
        .into_iter()
        .zip(rows)
        .map(|(rec, row)| ScoredWord {
            word: rec.word,
            sixltr: row.sixltr,
            dic: row.dic,
            scores: row.category_scores,
        })
        .collect();
    to_json(&LexiconView {
        categories,
        words,
        totals,
        dic_total,
    })
}

#[wasm_bindgen(js_name = buildMatrix)]
pub fn build_matrix(text: &str, rules: &str) -> Result<String, JsValue> {
    matrix_json(text, rules).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = recurrencePlot)]
pub fn recurrence_plot(
    text: &str,
    rules: &str,
    dict: &str,
    column: &str,
    lmin: usize,
) -> Result<String, JsValue> {
    recurrence_json(text, rules, dict, column, lmin).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = scoreLexicon)]
pub fn score_lexicon(text: &str, rules: &str, dict: &str) -> Result<String, JsValue> {
    lexicon_json(text, rules, dict).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = sampleText)]
pub fn sample_text() -> String {
    SAMPLE_TEXT.to_string()
}

#[wasm_bindgen(js_name = sampleRules)]
pub fn sample_rules() -> String {
    SAMPLE_RULES.to_string()
}

#[wasm_bindgen(js_name = sampleDictionary)]
pub fn sample_dictionary() -> String {
    SAMPLE_DICT.to_string()
}
