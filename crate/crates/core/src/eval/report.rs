//! CSV and plain-text renderings of a comparison matrix.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::str::FromStr;

use super::matrix::{CellKey, ComparisonMatrix, EvalCell};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    /// One row per cell with every score column and a `best` flag.
    Csv,
    /// Aligned blocks: totals, then each component, then full-reference
    /// scores, each laid out as (model, training set) rows × test set columns.
    Table,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(ReportFormat::Csv),
            "table" => Ok(ReportFormat::Table),
            other => Err(Error::UnknownFormat(other.to_string())),
        }
    }
}

type Getter = fn(&EvalCell) -> Option<f64>;

const BLOCKS: [(&str, Getter); 6] = [
    ("UCIQE", |c| c.total),
    ("sigma_c", |c| c.sigma_c),
    ("conl", |c| c.conl),
    ("mu_s", |c| c.mu_s),
    ("PSNR (dB)", |c| c.psnr_db),
    ("SSIM", |c| c.ssim),
];

/// Winner per (model, test set) under `value`: maximum, ties to the
/// smallest training-set id. Cells without a value are ignored.
fn best_cells(matrix: &ComparisonMatrix, value: Getter) -> HashSet<CellKey> {
    let mut best = HashSet::new();
    for model in matrix.models() {
        for test_set in matrix.test_sets() {
            let mut top: Option<(f64, &EvalCell)> = None;
            for c in matrix.cells() {
                if &c.model != model || &c.test_set != test_set {
                    continue;
                }
                let Some(v) = value(c) else { continue };
                top = match top {
                    Some((tv, tc)) if tv > v || (tv == v && tc.training_set <= c.training_set) => {
                        Some((tv, tc))
                    }
                    _ => Some((v, c)),
                };
            }
            if let Some((_, c)) = top {
                best.insert(c.key());
            }
        }
    }
    best
}

pub fn render_report(matrix: &ComparisonMatrix, format: ReportFormat) -> Result<String> {
    if matrix.is_empty() {
        return Err(Error::EmptyMatrix);
    }
    match format {
        ReportFormat::Csv => render_csv(matrix),
        ReportFormat::Table => Ok(render_table(matrix)),
    }
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn render_csv(matrix: &ComparisonMatrix) -> Result<String> {
    let best = best_cells(matrix, |c| c.total);
    let mut w = csv::Writer::from_writer(Vec::new());
    let err = |e: csv::Error| Error::Table {
        path: "<report>".into(),
        message: e.to_string(),
    };
    w.write_record([
        "model",
        "training_set",
        "test_set",
        "n_images",
        "sigma_c",
        "conl",
        "mu_s",
        "total",
        "psnr_db",
        "ssim",
        "best",
    ])
    .map_err(err)?;
    for c in matrix.ordered_cells() {
        let is_best = match c.total {
            Some(_) => best.contains(&c.key()).to_string(),
            None => String::new(),
        };
        w.write_record([
            c.model.clone(),
            c.training_set.clone(),
            c.test_set.clone(),
            c.n_images.map(|n| n.to_string()).unwrap_or_default(),
            opt(c.sigma_c),
            opt(c.conl),
            opt(c.mu_s),
            opt(c.total),
            opt(c.psnr_db),
            opt(c.ssim),
            is_best,
        ])
        .map_err(err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Table {
        path: "<report>".into(),
        message: e.to_string(),
    })?;
    Ok(String::from_utf8(bytes).expect("csv of utf-8 fields is utf-8"))
}

fn render_table(matrix: &ComparisonMatrix) -> String {
    let mut out = String::new();
    for (title, value) in BLOCKS {
        if !matrix.cells().iter().any(|c| value(c).is_some()) {
            continue;
        }
        let best = best_cells(matrix, value);
        let mut rows: Vec<Vec<String>> = Vec::new();
        let mut header = vec!["model".to_string(), "training set".to_string()];
        header.extend(matrix.test_sets().iter().cloned());
        rows.push(header);
        for model in matrix.models() {
            let mut first = true;
            for tr in matrix.training_sets() {
                if !matrix.test_sets().iter().any(|te| matrix.get(model, tr, te).is_some()) {
                    continue;
                }
                let mut row = vec![
                    if first { model.clone() } else { String::new() },
                    tr.clone(),
                ];
                first = false;
                for te in matrix.test_sets() {
                    let cell = matrix.get(model, tr, te);
                    row.push(match cell.and_then(|c| value(c).map(|v| (c, v))) {
                        Some((c, v)) => {
                            let mark = if best.contains(&c.key()) { "*" } else { "" };
                            format!("{v:.4}{mark}")
                        }
                        None => "-".to_string(),
                    });
                }
                rows.push(row);
            }
        }
        let widths: Vec<usize> = (0..rows[0].len())
            .map(|i| rows.iter().map(|r| r[i].chars().count()).max().unwrap_or(0))
            .collect();
        let _ = writeln!(out, "{title}");
        for (i, row) in rows.iter().enumerate() {
            let line: Vec<String> = row
                .iter()
                .zip(&widths)
                .map(|(s, &w)| format!("{s:<w$}"))
                .collect();
            let _ = writeln!(out, "{}", line.join("  ").trim_end());
            if i == 0 {
                let rule: Vec<String> = widths.iter().map(|&w| "-".repeat(w)).collect();
                let _ = writeln!(out, "{}", rule.join("  "));
            }
        }
        out.push('\n');
    }
    out.push_str("* best training set per (model, test set)\n");
    out
}
