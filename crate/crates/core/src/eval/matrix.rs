use std::collections::HashSet;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::UciqeScore;

/// Identifies one experiment: a model trained on one set, scored on another.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CellKey {
    pub model: String,
    pub training_set: String,
    pub test_set: String,
}

/// Aggregated scores for one experiment. Every score is optional so that
/// published tables carrying only totals or only components can be loaded.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalCell {
    pub model: String,
    pub training_set: String,
    pub test_set: String,
    #[serde(default)]
    pub n_images: Option<usize>,
    #[serde(default)]
    pub sigma_c: Option<f64>,
    #[serde(default)]
    pub conl: Option<f64>,
    #[serde(default)]
    pub mu_s: Option<f64>,
    #[serde(default)]
    pub total: Option<f64>,
    #[serde(default)]
    pub psnr_db: Option<f64>,
    #[serde(default)]
    pub ssim: Option<f64>,
}

impl EvalCell {
    pub fn new(
        model: impl Into<String>,
        training_set: impl Into<String>,
        test_set: impl Into<String>,
    ) -> Self {
        Self {
            model: model.into(),
            training_set: training_set.into(),
            test_set: test_set.into(),
            n_images: None,
            sigma_c: None,
            conl: None,
            mu_s: None,
            total: None,
            psnr_db: None,
            ssim: None,
        }
    }

    pub fn with_score(mut self, score: UciqeScore) -> Self {
        self.sigma_c = Some(score.sigma_c);
        self.conl = Some(score.conl);
        self.mu_s = Some(score.mu_s);
        self.total = Some(score.total);
        self
    }

    pub fn with_total(mut self, total: f64) -> Self {
        self.total = Some(total);
        self
    }

    pub fn key(&self) -> CellKey {
        CellKey {
            model: self.model.clone(),
            training_set: self.training_set.clone(),
            test_set: self.test_set.clone(),
        }
    }

    /// The full score when all three components are present.
    pub fn score(&self) -> Option<UciqeScore> {
        Some(UciqeScore::from_components(self.sigma_c?, self.conl?, self.mu_s?))
    }

    pub fn has_components(&self) -> bool {
        self.sigma_c.is_some() || self.conl.is_some() || self.mu_s.is_some()
    }
}

/// Cells plus axis orderings (first appearance order of each id).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ComparisonMatrix {
    cells: Vec<EvalCell>,
    models: Vec<String>,
    training_sets: Vec<String>,
    test_sets: Vec<String>,
}

fn push_unique(axis: &mut Vec<String>, id: &str) {
    if !axis.iter().any(|a| a == id) {
        axis.push(id.to_string());
    }
}

impl ComparisonMatrix {
    /// Rejects two cells with the same (model, training set, test set).
    pub fn from_cells(cells: Vec<EvalCell>) -> Result<Self> {
        let mut seen = HashSet::new();
        let mut m = ComparisonMatrix::default();
        for c in &cells {
            if !seen.insert(c.key()) {
                return Err(Error::DuplicateCell(
                    c.model.clone(),
                    c.training_set.clone(),
                    c.test_set.clone(),
                ));
            }
            push_unique(&mut m.models, &c.model);
            push_unique(&mut m.training_sets, &c.training_set);
            push_unique(&mut m.test_sets, &c.test_set);
        }
        m.cells = cells;
        Ok(m)
    }

    pub fn cells(&self) -> &[EvalCell] {
        &self.cells
    }

    pub fn into_cells(self) -> Vec<EvalCell> {
        self.cells
    }

    pub fn models(&self) -> &[String] {
        &self.models
    }

    pub fn training_sets(&self) -> &[String] {
        &self.training_sets
    }

    pub fn test_sets(&self) -> &[String] {
        &self.test_sets
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn get(&self, model: &str, training_set: &str, test_set: &str) -> Option<&EvalCell> {
        self.cells
            .iter()
            .find(|c| c.model == model && c.training_set == training_set && c.test_set == test_set)
    }

    /// Cells in axis order: model, then training set, then test set.
    pub fn ordered_cells(&self) -> Vec<&EvalCell> {
        let mut out = Vec::with_capacity(self.cells.len());
        for m in &self.models {
            for tr in &self.training_sets {
                for te in &self.test_sets {
                    if let Some(c) = self.get(m, tr, te) {
                        out.push(c);
                    }
                }
            }
        }
        out
    }

    /// Concatenates matrices, keeping the axis order of `self` first.
    pub fn merge(self, other: ComparisonMatrix) -> Result<Self> {
        let mut cells = self.cells;
        cells.extend(other.cells);
        Self::from_cells(cells)
    }

    /// Reads cells from CSV with a header row. Columns other than the
    /// [`EvalCell`] fields are ignored; absent score columns read as empty.
    pub fn read_csv(reader: impl Read, origin: &str) -> Result<Self> {
        let mut rdr = csv::Reader::from_reader(reader);
        let mut cells = Vec::new();
        for (i, row) in rdr.deserialize::<EvalCell>().enumerate() {
            cells.push(row.map_err(|e| Error::Table {
                path: origin.to_string(),
                message: format!("row {}: {e}", i + 1),
            })?);
        }
        Self::from_cells(cells)
    }

    pub fn write_csv(&self, writer: impl Write) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        let err = |e: csv::Error| Error::Table {
            path: "<csv>".into(),
            message: e.to_string(),
        };
        for c in self.ordered_cells() {
            w.serialize(c).map_err(err)?;
        }
        w.flush().map_err(|e| err(e.into()))?;
        Ok(())
    }

    /// One JSON object per line, one line per cell.
    pub fn read_jsonl(text: &str, origin: &str) -> Result<Self> {
        let cells = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty())
            .map(|(i, l)| {
                serde_json::from_str(l).map_err(|e| Error::Table {
                    path: origin.to_string(),
                    message: format!("line {}: {e}", i + 1),
                })
            })
            .collect::<Result<Vec<EvalCell>>>()?;
        Self::from_cells(cells)
    }

    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for c in self.ordered_cells() {
            out.push_str(&serde_json::to_string(c).expect("cell serializes"));
            out.push('\n');
        }
        out
    }

    /// Loads a `.jsonl` matrix or a CSV cell table, chosen by extension.
    pub fn load(path: &Path) -> Result<Self> {
        let origin = path.display().to_string();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        match path.extension().and_then(|e| e.to_str()) {
            Some("jsonl") | Some("json") => Self::read_jsonl(&text, &origin),
            _ => Self::read_csv(text.as_bytes(), &origin),
        }
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let bytes = match path.extension().and_then(|e| e.to_str()) {
            Some("jsonl") | Some("json") => self.to_jsonl().into_bytes(),
            _ => {
                let mut buf = Vec::new();
                self.write_csv(&mut buf)?;
                buf
            }
        };
        std::fs::write(path, bytes).map_err(|e| Error::io(path, e))
    }
}
