//! Source preparation and paired dataset assembly.
//!
//! A dataset directory holds `reference/<name>.png` for every clean source
//! used, `<type-slug>/<name>.png` for each degraded counterpart, and a
//! `manifest.jsonl` describing the pairs. Paths inside the manifest are
//! relative to its directory.

mod assemble;
mod manifest;
mod shuffle;
mod tiles;
mod validate;

pub use assemble::{
    content_digest, plan_balanced, plan_single_type, Assembler, PlannedPair, SamplingMode,
};
pub use manifest::{DatasetManifest, PairRecord, MANIFEST_FILE, MANIFEST_FORMAT};
pub use shuffle::{seeded_permutation, seeded_shuffle};
pub use tiles::{
    entropy_filter, gray_entropy, tile_and_downsample, SourceTile, DEFAULT_ENTROPY_THRESHOLD,
    DOWNSAMPLE_FACTOR, OUTPUT_SIZE, TILE_SIZE,
};
pub use validate::{check_pairing, validate_manifest, ValidationReport, Violation};
