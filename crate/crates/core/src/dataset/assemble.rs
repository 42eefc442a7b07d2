use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::manifest::{DatasetManifest, PairRecord, MANIFEST_FILE};
use super::shuffle::seeded_permutation;
use crate::degrade::{DegradationBackend, DegradationType};
use crate::error::{Error, Result};
use crate::image::ImageRgb8;

const REFERENCE_DIR: &str = "reference";

/// How sources are distributed over the six types of a mixed dataset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SamplingMode {
    /// Types take consecutive runs of one shuffled sequence (cycled when
    /// there are fewer sources than pairs). Sources are disjoint across
    /// types whenever `sources >= n_total`, and the reference multiset
    /// equals that of a single-type dataset with the same seed.
    #[default]
    Partition,
    /// Every type uses the same first `n_total / 6` shuffled sources.
    Shared,
}

/// One (type, source index) assignment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct PlannedPair {
    pub dtype: DegradationType,
    pub source: usize,
}

/// Source assignments for a balanced mixed dataset over `n_sources`
/// sources, in (type, draw) order.
pub fn plan_balanced(
    n_sources: usize,
    n_total: usize,
    seed: u64,
    sampling: SamplingMode,
) -> Result<Vec<PlannedPair>> {
    if !n_total.is_multiple_of(6) {
        return Err(Error::NotDivisible(n_total));
    }
    if n_total == 0 {
        return Err(Error::EmptyDataset);
    }
    let per_type = n_total / 6;
    if n_sources < per_type || n_sources == 0 {
        return Err(Error::InsufficientSources {
            needed: per_type.max(1),
            available: n_sources,
        });
    }
    let order = seeded_permutation(n_sources, seed);
    let mut plan = Vec::with_capacity(n_total);
    for (i, &dtype) in DegradationType::ALL.iter().enumerate() {
        for k in 0..per_type {
            let draw = match sampling {
                SamplingMode::Partition => i * per_type + k,
                SamplingMode::Shared => k,
            };
            plan.push(PlannedPair {
                dtype,
                source: order[draw % n_sources],
            });
        }
    }
    Ok(plan)
}

/// Source assignments for a dataset of one type. Uses the same shuffled
/// sequence as [`plan_balanced`] in partition mode.
pub fn plan_single_type(
    n_sources: usize,
    dtype: DegradationType,
    n_total: usize,
    seed: u64,
) -> Result<Vec<PlannedPair>> {
    if n_total == 0 {
        return Err(Error::EmptyDataset);
    }
    if n_sources < n_total {
        return Err(Error::InsufficientSources {
            needed: n_total.max(1),
            available: n_sources,
        });
    }
    let order = seeded_permutation(n_sources, seed);
    Ok(order[..n_total]
        .iter()
        .map(|&source| PlannedPair { dtype, source })
        .collect())
}

/// `content:` + hex SHA-256 over the dimensions and pixel bytes.
pub fn content_digest(image: &ImageRgb8) -> String {
    let mut h = Sha256::new();
    h.update((image.width() as u64).to_le_bytes());
    h.update((image.height() as u64).to_le_bytes());
    h.update(image.as_bytes());
    format!("content:{}", hex::encode(h.finalize()))
}

/// Writes paired datasets into `out_dir`. Work runs on the current rayon
/// pool; manifests do not depend on the degree of parallelism.
pub struct Assembler<'a> {
    backend: &'a dyn DegradationBackend,
    out_dir: PathBuf,
    name: String,
    seed: u64,
    sampling: SamplingMode,
}

struct Source {
    path: PathBuf,
    file_name: String,
    stem: String,
}

impl<'a> Assembler<'a> {
    pub fn new(backend: &'a dyn DegradationBackend, out_dir: impl Into<PathBuf>) -> Self {
        Self {
            backend,
            out_dir: out_dir.into(),
            name: "dataset".to_string(),
            seed: 0,
            sampling: SamplingMode::default(),
        }
    }

    pub fn name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn sampling(mut self, sampling: SamplingMode) -> Self {
        self.sampling = sampling;
        self
    }

    pub fn manifest_path(&self) -> PathBuf {
        self.out_dir.join(MANIFEST_FILE)
    }

    /// Mixed dataset with exactly `n_total / 6` pairs per type.
    pub fn balanced(&self, sources: &[PathBuf], n_total: usize) -> Result<DatasetManifest> {
        let sources = prepare_sources(sources)?;
        let plan = plan_balanced(sources.len(), n_total, self.seed, self.sampling)?;
        self.build(&sources, plan, n_total, true)
    }

    /// Dataset whose `n_total` pairs all carry `dtype`.
    pub fn single_type(
        &self,
        sources: &[PathBuf],
        dtype: DegradationType,
        n_total: usize,
    ) -> Result<DatasetManifest> {
        let sources = prepare_sources(sources)?;
        let plan = plan_single_type(sources.len(), dtype, n_total, self.seed)?;
        self.build(&sources, plan, n_total, false)
    }

    fn build(
        &self,
        sources: &[Source],
        mut plan: Vec<PlannedPair>,
        n_total: usize,
        balanced: bool,
    ) -> Result<DatasetManifest> {
        // final record order: (type, source file name)
        plan.sort_by(|a, b| {
            (a.dtype, &sources[a.source].file_name).cmp(&(b.dtype, &sources[b.source].file_name))
        });

        let used: BTreeSet<usize> = plan.iter().map(|p| p.source).collect();
        let used: Vec<usize> = used.into_iter().collect();
        used.par_iter()
            .map(|&i| {
                let src = &sources[i];
                ImageRgb8::load(&src.path)?.save_png(self.out_dir.join(reference_rel(&src.stem)))
            })
            .collect::<Result<Vec<()>>>()?;

        let descriptor = self.backend.descriptor();
        let outcomes = plan
            .par_iter()
            .map(|p| self.degrade_one(&sources[p.source], p.dtype, &descriptor))
            .collect::<Result<Vec<_>>>()?;

        let mut specs = BTreeMap::new();
        let mut records = Vec::with_capacity(outcomes.len());
        for (record, spec) in outcomes {
            if let Some(spec) = spec {
                specs.entry(record.dtype).or_insert(spec);
            }
            records.push(record);
        }

        let manifest = DatasetManifest {
            name: self.name.clone(),
            seed: self.seed,
            total: n_total,
            balanced,
            sampling: self.sampling,
            backend: descriptor,
            per_type_counts: DatasetManifest::count_records(&records),
            specs,
            records,
        };
        manifest.save(&self.manifest_path())?;
        Ok(manifest)
    }

    fn degrade_one(
        &self,
        src: &Source,
        dtype: DegradationType,
        descriptor: &str,
    ) -> Result<(PairRecord, Option<crate::degrade::DegradationSpec>)> {
        let wrap = |cause: Error| Error::Backend {
            dtype: dtype.slug().to_string(),
            source_name: src.file_name.clone(),
            cause: Box::new(cause),
        };
        let image = ImageRgb8::load(&src.path).map_err(wrap)?;
        let degraded = self
            .backend
            .degrade(&src.file_name, &image, dtype)
            .map_err(wrap)?;
        let degraded_rel = format!("{}/{}.png", dtype.slug(), src.stem);
        degraded.image.save_png(self.out_dir.join(&degraded_rel))?;
        let spec_digest = match &degraded.spec {
            Some(spec) => spec.digest(),
            None => content_digest(&degraded.image),
        };
        Ok((
            PairRecord {
                name: src.stem.clone(),
                source_path: reference_rel(&src.stem),
                degraded_path: degraded_rel,
                dtype,
                backend_descriptor: descriptor.to_string(),
                spec_digest,
            },
            degraded.spec,
        ))
    }
}

fn reference_rel(stem: &str) -> String {
    format!("{REFERENCE_DIR}/{stem}.png")
}

/// Sorts sources by file name and rejects repeated stems.
fn prepare_sources(paths: &[PathBuf]) -> Result<Vec<Source>> {
    let mut sources: Vec<Source> = paths
        .iter()
        .map(|p| {
            let file_name = file_name_of(p)?;
            let stem = Path::new(&file_name)
                .file_stem()
                .and_then(|s| s.to_str())
                .unwrap_or(&file_name)
                .to_string();
            Ok(Source {
                path: p.clone(),
                file_name,
                stem,
            })
        })
        .collect::<Result<_>>()?;
    sources.sort_by(|a, b| a.file_name.cmp(&b.file_name));
    let mut seen = BTreeSet::new();
    for s in &sources {
        if !seen.insert(s.stem.as_str()) {
            return Err(Error::DuplicateSource(s.stem.clone()));
        }
    }
    Ok(sources)
}

fn file_name_of(p: &Path) -> Result<String> {
    p.file_name()
        .and_then(|n| n.to_str())
        .map(str::to_string)
        .ok_or_else(|| Error::InvalidImage(format!("source path {} has no UTF-8 file name", p.display())))
}
