use std::path::Path;
use std::sync::OnceLock;

use serde::Deserialize;
use sha2::{Digest, Sha256};

use super::{DegradationSpec, DegradationType};
use crate::error::{Error, Result};

/// The preset file shipped with the crate.
pub const BUILTIN_PRESETS: &str = include_str!("../../presets/default.toml");

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Entry {
    beta: [f64; 3],
    background: [u8; 3],
    depth: f64,
    gamma: f64,
    gain: f64,
    blur_sigma: f64,
    #[serde(default)]
    noise_sigma: f64,
    #[serde(default)]
    seed: u64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
struct PresetFile {
    version: u32,
    blue: Entry,
    low_light: Entry,
    deep_blue: Entry,
    deep_green: Entry,
    green: Entry,
    blurry: Entry,
}

/// One validated spec per degradation type.
#[derive(Debug, Clone, PartialEq)]
pub struct Presets {
    version: u32,
    specs: [DegradationSpec; 6],
    digest: String,
}

impl Presets {
    pub fn builtin() -> &'static Presets {
        static BUILTIN: OnceLock<Presets> = OnceLock::new();
        BUILTIN.get_or_init(|| {
            Presets::parse(BUILTIN_PRESETS, "<builtin>").expect("builtin presets are valid")
        })
    }

    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        let err = |message: String| Error::Preset {
            path: origin.to_string(),
            message,
        };
        let file: PresetFile = toml::from_str(text).map_err(|e| err(e.to_string()))?;
        let entries = [
            file.blue,
            file.low_light,
            file.deep_blue,
            file.deep_green,
            file.green,
            file.blurry,
        ];
        let specs: [DegradationSpec; 6] = std::array::from_fn(|i| {
            let e = &entries[i];
            DegradationSpec {
                dtype: DegradationType::ALL[i],
                beta: e.beta,
                background: e.background,
                depth: e.depth,
                gamma: e.gamma,
                gain: e.gain,
                blur_sigma: e.blur_sigma,
                noise_sigma: e.noise_sigma,
                seed: e.seed,
            }
        });
        for spec in &specs {
            spec.validate()
                .map_err(|e| err(format!("[{}]: {e}", spec.dtype.slug())))?;
        }
        let mut hasher = Sha256::new();
        for spec in &specs {
            hasher.update(spec.digest().as_bytes());
        }
        Ok(Self {
            version: file.version,
            specs,
            digest: hex::encode(hasher.finalize()),
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn spec(&self, dtype: DegradationType) -> &DegradationSpec {
        &self.specs[dtype.index()]
    }

    pub fn version(&self) -> u32 {
        self.version
    }

    /// Hash over all six spec digests.
    pub fn digest(&self) -> &str {
        &self.digest
    }
}
