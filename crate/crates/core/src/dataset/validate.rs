use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;

use super::assemble::content_digest;
use super::manifest::DatasetManifest;
use crate::degrade::{apply_degradation, DegradationType};
use crate::error::Result;
use crate::image::ImageRgb8;

#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    MissingPath {
        record: usize,
        field: &'static str,
        path: String,
    },
    /// `records.len()`, the header total, or the sum of the header counts disagree.
    TotalMismatch {
        header_total: usize,
        counts_sum: usize,
        records: usize,
    },
    /// Header count for a type differs from the number of records with it.
    CountMismatch {
        dtype: DegradationType,
        header: usize,
        actual: usize,
    },
    Unbalanced {
        counts: BTreeMap<DegradationType, usize>,
    },
    DigestMismatch {
        record: usize,
        expected: String,
        found: String,
    },
    MissingSpec {
        record: usize,
        dtype: DegradationType,
    },
    DuplicateDegradedPath {
        path: String,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::MissingPath { record, field, path } => {
                write!(f, "record {record}: {field} {path} does not exist")
            }
            Violation::TotalMismatch {
                header_total,
                counts_sum,
                records,
            } => write!(
                f,
                "total {header_total}, per-type counts sum to {counts_sum}, {records} records"
            ),
            Violation::CountMismatch {
                dtype,
                header,
                actual,
            } => write!(f, "{}: header count {header}, {actual} records", dtype.slug()),
            Violation::Unbalanced { counts } => {
                let parts: Vec<String> =
                    counts.iter().map(|(t, c)| format!("{}={c}", t.slug())).collect();
                write!(f, "balanced manifest has unequal counts: {}", parts.join(", "))
            }
            Violation::DigestMismatch {
                record,
                expected,
                found,
            } => write!(f, "record {record}: digest {found} does not match {expected}"),
            Violation::MissingSpec { record, dtype } => {
                write!(f, "record {record}: no spec for {} in header", dtype.slug())
            }
            Violation::DuplicateDegradedPath { path } => {
                write!(f, "degraded path {path} appears more than once")
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return writeln!(f, "ok");
        }
        for v in &self.violations {
            writeln!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Checks count arithmetic, balance, path existence and digests. Relative
/// paths resolve against `base_dir`. Records with a `content:` digest are
/// re-hashed from the degraded file when it exists.
pub fn validate_manifest(manifest: &DatasetManifest, base_dir: &Path) -> ValidationReport {
    let mut violations = Vec::new();

    let counts_sum: usize = manifest.per_type_counts.values().sum();
    if counts_sum != manifest.total || manifest.records.len() != manifest.total {
        violations.push(Violation::TotalMismatch {
            header_total: manifest.total,
            counts_sum,
            records: manifest.records.len(),
        });
    }
    let actual = DatasetManifest::count_records(&manifest.records);
    for t in DegradationType::ALL {
        let header = manifest.per_type_counts.get(&t).copied().unwrap_or(0);
        if header != actual[&t] {
            violations.push(Violation::CountMismatch {
                dtype: t,
                header,
                actual: actual[&t],
            });
        }
    }
    if manifest.balanced {
        let expected = manifest.total / 6;
        let balanced = manifest.total.is_multiple_of(6)
            && DegradationType::ALL
                .iter()
                .all(|t| manifest.per_type_counts.get(t).copied().unwrap_or(0) == expected);
        if !balanced {
            violations.push(Violation::Unbalanced {
                counts: manifest.per_type_counts.clone(),
            });
        }
    }

    let mut seen = BTreeSet::new();
    for (i, r) in manifest.records.iter().enumerate() {
        if !seen.insert(r.degraded_path.as_str()) {
            violations.push(Violation::DuplicateDegradedPath {
                path: r.degraded_path.clone(),
            });
        }
        let source = base_dir.join(&r.source_path);
        if !source.is_file() {
            violations.push(Violation::MissingPath {
                record: i,
                field: "source_path",
                path: r.source_path.clone(),
            });
        }
        let degraded = base_dir.join(&r.degraded_path);
        let degraded_exists = degraded.is_file();
        if !degraded_exists {
            violations.push(Violation::MissingPath {
                record: i,
                field: "degraded_path",
                path: r.degraded_path.clone(),
            });
        }
        if r.spec_digest.starts_with("content:") {
            if degraded_exists {
                let found = match ImageRgb8::load(&degraded) {
                    Ok(img) => content_digest(&img),
                    Err(e) => format!("<unreadable: {e}>"),
                };
                if found != r.spec_digest {
                    violations.push(Violation::DigestMismatch {
                        record: i,
                        expected: r.spec_digest.clone(),
                        found,
                    });
                }
            }
        } else {
            match manifest.specs.get(&r.dtype) {
                Some(spec) => {
                    let expected = spec.digest();
                    if expected != r.spec_digest {
                        violations.push(Violation::DigestMismatch {
                            record: i,
                            expected,
                            found: r.spec_digest.clone(),
                        });
                    }
                }
                None => violations.push(Violation::MissingSpec {
                    record: i,
                    dtype: r.dtype,
                }),
            }
        }
    }
    ValidationReport { violations }
}

/// Re-derives each parametric record's degraded image from its reference
/// and the header spec. Returns the indices of records that differ.
/// Records without a header spec are skipped.
pub fn check_pairing(manifest: &DatasetManifest, base_dir: &Path) -> Result<Vec<usize>> {
    let mut mismatched = Vec::new();
    for (i, r) in manifest.records.iter().enumerate() {
        let Some(spec) = manifest.specs.get(&r.dtype) else {
            continue;
        };
        let source = ImageRgb8::load(base_dir.join(&r.source_path))?;
        let degraded = ImageRgb8::load(base_dir.join(&r.degraded_path))?;
        if apply_degradation(&source, spec)? != degraded {
            mismatched.push(i);
        }
    }
    Ok(mismatched)
}
