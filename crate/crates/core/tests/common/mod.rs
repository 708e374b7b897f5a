#![allow(dead_code)]

use std::path::PathBuf;

pub fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data")
}

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
}

/// Brute-force RQA: materializes the full N×N plot with a pair scan, then
/// walks every diagonal line from its first cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleRqa {
    pub rr: f64,
    pub det: f64,
    pub maxline: usize,
    pub meanline: f64,
}

pub fn dense_plot<T: PartialEq>(values: &[T]) -> Vec<Vec<bool>> {
    values
        .iter()
        .map(|a| values.iter().map(|b| a == b).collect())
        .collect()
}

pub fn oracle_rqa<T: PartialEq>(values: &[T], lmin: usize) -> OracleRqa {
    let m = dense_plot(values);
    let n = values.len();
    let points = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .enumerate()
                .filter(|&(j, &on)| on && i != j)
                .count()
        })
        .sum::<usize>();
    let mut lengths = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i == j || !m[i][j] {
                continue;
            }
            let starts = i == 0 || j == 0 || !m[i - 1][j - 1];
            if !starts {
                continue;
            }
            let mut len = 0;
            while i + len < n && j + len < n && m[i + len][j + len] {
                len += 1;
            }
            lengths.push(len);
        }
    }
    let long: Vec<usize> = lengths.into_iter().filter(|&l| l >= lmin).collect();
    let on_lines: usize = long.iter().sum();
    let div = |a: usize, b: usize| if b == 0 { 0.0 } else { a as f64 / b as f64 };
    OracleRqa {
        rr: div(points, n * n - n),
        det: div(on_lines, points),
        maxline: long.iter().copied().max().unwrap_or(0),
        meanline: div(on_lines, long.len()),
    }
}
