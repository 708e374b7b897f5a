//! Categorical recurrence plots and recurrence quantification.
//!
//! Two positions recur when their values are identical. A categorical plot
//! is fully described by a class label per position, so that is all
//! [`RecurrencePlot`] stores; pairs are derived on demand.
//!
//! The line of identity is part of the plot but excluded from every metric:
//!
//! * `rr` – recurrent off-diagonal cells / (n² − n)
//! * `det` – share of recurrent off-diagonal cells lying on diagonal lines
//!   of length ≥ `lmin`
//! * `maxline`, `meanline` – longest and mean length of those lines

use std::collections::HashMap;
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::strip_word;
use crate::rules::CleanupRules;
use crate::util;

pub const DEFAULT_LMIN: usize = 2;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecurrencePlot {
    key: String,
    labels: Vec<u32>,
}

impl RecurrencePlot {
    pub fn key(&self) -> &str {
        &self.key
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    /// Class label per position, in order of first appearance.
    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    /// 0-based lookup.
    pub fn is_recurrent(&self, i: usize, j: usize) -> bool {
        self.labels[i] == self.labels[j]
    }

    /// All recurrent pairs as 1-based `(i, j)`, row-major, including the
    /// main diagonal.
    pub fn points(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.n();
        (0..n).flat_map(move |i| {
            (0..n)
                .filter(move |&j| self.is_recurrent(i, j))
                .map(move |j| (i + 1, j + 1))
        })
    }

    pub fn off_diagonal_points(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.points().filter(|(i, j)| i != j)
    }
}

pub fn recurrence_matrix<S: AsRef<str>>(values: &[S], key: &str) -> Result<RecurrencePlot> {
    if values.is_empty() {
        return Err(Error::EmptySequence);
    }
    let mut ids: HashMap<&str, u32> = HashMap::new();
    let labels = values
        .iter()
        .map(|v| {
            let next = ids.len() as u32;
            *ids.entry(v.as_ref()).or_insert(next)
        })
        .collect();
    Ok(RecurrencePlot {
        key: key.to_string(),
        labels,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RqaMetrics {
    pub rr: f64,
    pub det: f64,
    pub maxline: usize,
    pub meanline: f64,
    pub lmin: usize,
}

pub fn rqa(plot: &RecurrencePlot, lmin: usize) -> Result<RqaMetrics> {
    if lmin < 2 {
        return Err(Error::InvalidLmin(lmin));
    }
    let n = plot.n();
    let labels = plot.labels();
    // upper triangle only; the lower one mirrors it
    let mut points = 0usize;
    let mut line_points = 0usize;
    let mut lines = 0usize;
    let mut maxline = 0usize;
    let mut close = |run: usize| {
        if run >= lmin {
            lines += 1;
            line_points += run;
            maxline = maxline.max(run);
        }
    };
    for offset in 1..n {
        let mut run = 0;
        for i in 0..n - offset {
            if labels[i] == labels[i + offset] {
                run += 1;
                points += 1;
            } else {
                close(run);
                run = 0;
            }
        }
        close(run);
    }
    let (points, line_points, lines) = (2 * points, 2 * line_points, 2 * lines);
    let cells = n * n - n;
    Ok(RqaMetrics {
        rr: ratio(points, cells),
        det: ratio(line_points, points),
        maxline,
        meanline: ratio(line_points, lines),
        lmin,
    })
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

impl RqaMetrics {
    pub fn to_name_value(&self) -> String {
        format!(
            "rr={}\ndet={}\nmaxline={}\nmeanline={}\nlmin={}\n",
            self.rr, self.det, self.maxline, self.meanline, self.lmin
        )
    }
}

pub fn metrics_to_string(plot: &RecurrencePlot, metrics: &RqaMetrics) -> Result<String> {
    let bytes = util::csv_bytes(b',', |w| {
        w.write_record(["key", "n", "lmin", "rr", "det", "maxline", "meanline"])?;
        w.write_record([
            plot.key().to_string(),
            plot.n().to_string(),
            metrics.lmin.to_string(),
            metrics.rr.to_string(),
            metrics.det.to_string(),
            metrics.maxline.to_string(),
            metrics.meanline.to_string(),
        ])?;
        Ok(())
    })?;
    Ok(String::from_utf8(bytes).expect("metrics are valid UTF-8"))
}

pub fn export_metrics(plot: &RecurrencePlot, metrics: &RqaMetrics, path: &Path) -> Result<()> {
    util::write_atomic(path, metrics_to_string(plot, metrics)?.as_bytes())
}

/// Off-diagonal recurrent points as a sparse `i,j` coordinate list.
pub fn plot_to_string(plot: &RecurrencePlot) -> String {
    let mut out = String::from("i,j\n");
    for (i, j) in plot.off_diagonal_points() {
        out.push_str(&format!("{i},{j}\n"));
    }
    out
}

pub fn export_plot(plot: &RecurrencePlot, path: &Path) -> Result<()> {
    util::write_atomic(path, plot_to_string(plot).as_bytes())
}

/// Comparison key for a word: stripped of quotes and terminal punctuation,
/// lowercased, so `won!` recurs with `won`.
pub fn word_key(word: &str, rules: &CleanupRules) -> String {
    strip_word(word, rules).to_lowercase()
}

/// Pulls one column out of a delimited table with a header row (a matrix,
/// analysis or integrated file). The `word` column is normalized with
/// [`word_key`].
pub fn column_from_str(
    text: &str,
    delimiter: u8,
    column: &str,
    rules: &CleanupRules,
) -> Result<Vec<String>> {
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(delimiter)
        .from_reader(text.as_bytes());
    let idx = reader
        .headers()?
        .iter()
        .position(|h| h == column)
        .ok_or_else(|| Error::UnknownColumn(column.to_string()))?;
    let mut values = Vec::new();
    for rec in reader.records() {
        let rec = rec?;
        let field = rec.get(idx).unwrap_or_default();
        values.push(if column == "word" {
            word_key(field, rules)
        } else {
            field.to_string()
        });
    }
    Ok(values)
}

pub fn load_column(path: &Path, column: &str, rules: &CleanupRules) -> Result<Vec<String>> {
    let text = util::read_to_string(path)?;
    let delimiter = if path.extension().is_some_and(|e| e == "tsv" || e == "txt") {
        b'\t'
    } else {
        b','
    };
    column_from_str(&text, delimiter, column, rules)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plot(values: &[&str]) -> RecurrencePlot {
        recurrence_matrix(values, "t").unwrap()
    }

    #[test]
    fn identical_sequence_is_full() {
        let p = plot(&["x", "x", "x"]);
        assert_eq!(p.points().count(), 9);
        assert_eq!(rqa(&p, 2).unwrap().rr, 1.0);
    }

    #[test]
    fn distinct_sequence_is_diagonal() {
        let p = plot(&["a", "b", "c"]);
        assert_eq!(p.points().collect::<Vec<_>>(), [(1, 1), (2, 2), (3, 3)]);
        let m = rqa(&p, 2).unwrap();
        assert_eq!((m.rr, m.det, m.maxline, m.meanline), (0.0, 0.0, 0, 0.0));
    }

    #[test]
    fn the_cat_the() {
        let p = plot(&["the", "cat", "the"]);
        let off: Vec<_> = p.off_diagonal_points().collect();
        assert_eq!(off, [(1, 3), (3, 1)]);
        assert_eq!(plot_to_string(&p), "i,j\n1,3\n3,1\n");
    }

    #[test]
    fn abab() {
        let m = rqa(&plot(&["a", "b", "a", "b"]), 2).unwrap();
        assert_eq!(m.rr, 4.0 / 12.0);
        assert_eq!(m.det, 1.0);
        assert_eq!(m.maxline, 2);
        assert_eq!(m.meanline, 2.0);
    }

    #[test]
    fn single_point_and_errors() {
        let m = rqa(&plot(&["a"]), 2).unwrap();
        assert_eq!((m.rr, m.det), (0.0, 0.0));
        assert!(matches!(rqa(&plot(&["a"]), 1), Err(Error::InvalidLmin(1))));
        assert!(matches!(
            recurrence_matrix::<&str>(&[], "t"),
            Err(Error::EmptySequence)
        ));
    }

    #[test]
    fn distinct_export_is_header_only() {
        assert_eq!(plot_to_string(&plot(&["a", "b"])), "i,j\n");
    }

    #[test]
    fn metric_outputs() {
        let p = plot(&["a", "b", "a", "b"]);
        let m = rqa(&p, 2).unwrap();
        assert_eq!(
            m.to_name_value(),
            "rr=0.3333333333333333\ndet=1\nmaxline=2\nmeanline=2\nlmin=2\n"
        );
        assert_eq!(
            metrics_to_string(&p, &m).unwrap(),
            "key,n,lmin,rr,det,maxline,meanline\nt,4,2,0.3333333333333333,1,2,2\n"
        );
    }

    #[test]
    fn word_column_is_normalized() {
        let text = "canto,line,word,charnum,speech,eos\n1,1,Won!,3,0,1\n1,1,won,3,0,0\n";
        let rules = CleanupRules::default();
        let words = column_from_str(text, b',', "word", &rules).unwrap();
        assert_eq!(words, ["won", "won"]);
        let eos = column_from_str(text, b',', "eos", &rules).unwrap();
        assert_eq!(eos, ["1", "0"]);
        assert!(matches!(
            column_from_str(text, b',', "nope", &rules),
            Err(Error::UnknownColumn(_))
        ));
    }
}
