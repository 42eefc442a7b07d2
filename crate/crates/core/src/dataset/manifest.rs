//! JSON Lines manifest.
//!
//! Line 1 is a header object:
//!
//! ```text
//! {"format":"uwsynth-manifest/1","name":..,"seed":..,"total":..,
//!  "balanced":..,"sampling":..,"backend":..,
//!  "per_type_counts":{"blue":..,"low-light":..,...},
//!  "specs":{"blue":{...},...}}
//! ```
//!
//! Every following line is one [`PairRecord`] with the fields `name`,
//! `source_path`, `degraded_path`, `dtype`, `backend_descriptor` and
//! `spec_digest`. `specs` holds the full parameters for each type when the
//! parametric backend was used and is empty otherwise.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::SamplingMode;
use crate::degrade::{DegradationSpec, DegradationType};
use crate::error::{Error, Result};

pub const MANIFEST_FORMAT: &str = "uwsynth-manifest/1";
pub const MANIFEST_FILE: &str = "manifest.jsonl";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairRecord {
    pub name: String,
    pub source_path: String,
    pub degraded_path: String,
    pub dtype: DegradationType,
    pub backend_descriptor: String,
    pub spec_digest: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DatasetManifest {
    pub name: String,
    pub seed: u64,
    pub total: usize,
    /// Whether equal per-type counts are part of the contract.
    pub balanced: bool,
    pub sampling: SamplingMode,
    pub backend: String,
    pub per_type_counts: BTreeMap<DegradationType, usize>,
    pub specs: BTreeMap<DegradationType, DegradationSpec>,
    pub records: Vec<PairRecord>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Header {
    format: String,
    name: String,
    seed: u64,
    total: usize,
    balanced: bool,
    sampling: SamplingMode,
    backend: String,
    per_type_counts: BTreeMap<DegradationType, usize>,
    specs: BTreeMap<DegradationType, DegradationSpec>,
}

impl DatasetManifest {
    /// Per-type counts with every type present, computed from `records`.
    pub fn count_records(records: &[PairRecord]) -> BTreeMap<DegradationType, usize> {
        let mut counts: BTreeMap<_, _> = DegradationType::ALL.iter().map(|&t| (t, 0)).collect();
        for r in records {
            *counts.entry(r.dtype).or_default() += 1;
        }
        counts
    }

    pub fn write_to(&self, mut out: impl Write) -> std::io::Result<()> {
        let header = Header {
            format: MANIFEST_FORMAT.to_string(),
            name: self.name.clone(),
            seed: self.seed,
            total: self.total,
            balanced: self.balanced,
            sampling: self.sampling,
            backend: self.backend.clone(),
            per_type_counts: self.per_type_counts.clone(),
            specs: self.specs.clone(),
        };
        serde_json::to_writer(&mut out, &header)?;
        out.write_all(b"\n")?;
        for r in &self.records {
            serde_json::to_writer(&mut out, r)?;
            out.write_all(b"\n")?;
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut buf = Vec::new();
        self.write_to(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("json is utf-8")
    }

    /// Parses manifest text; `origin` only labels errors.
    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        let err = |line: usize, message: String| Error::Manifest {
            path: origin.to_string(),
            line,
            message,
        };
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, first) = lines.next().ok_or_else(|| err(1, "empty manifest".into()))?;
        let header: Header = serde_json::from_str(first).map_err(|e| err(1, e.to_string()))?;
        if header.format != MANIFEST_FORMAT {
            return Err(err(1, format!("unsupported format {:?}", header.format)));
        }
        let records = lines
            .map(|(i, l)| serde_json::from_str(l).map_err(|e| err(i + 1, e.to_string())))
            .collect::<Result<Vec<PairRecord>>>()?;
        Ok(Self {
            name: header.name,
            seed: header.seed,
            total: header.total,
            balanced: header.balanced,
            sampling: header.sampling,
            backend: header.backend,
            per_type_counts: header.per_type_counts,
            specs: header.specs,
            records,
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_text()).map_err(|e| Error::io(path, e))
    }

    /// Source paths of all records, sorted; equal for two manifests exactly
    /// when they use the same references the same number of times.
    pub fn reference_multiset(&self) -> Vec<&str> {
        let mut refs: Vec<&str> = self.records.iter().map(|r| r.source_path.as_str()).collect();
        refs.sort_unstable();
        refs
    }
}
