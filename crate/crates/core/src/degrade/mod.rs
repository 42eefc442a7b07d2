//! Parametric underwater degradation synthesis and the backend abstraction
//! used to plug in externally generated degradations.

mod backend;
mod blur;
mod presets;

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub use backend::{Degraded, DegradationBackend, DirectoryBackend, ParametricBackend};
pub use blur::{gaussian_blur_planes, gaussian_kernel};
pub use presets::{Presets, BUILTIN_PRESETS};

use crate::error::{Error, Result};
use crate::image::{to_byte, ImageRgb8};

/// The six underwater appearance classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DegradationType {
    Blue,
    LowLight,
    DeepBlue,
    DeepGreen,
    Green,
    Blurry,
}

impl DegradationType {
    pub const ALL: [DegradationType; 6] = [
        DegradationType::Blue,
        DegradationType::LowLight,
        DegradationType::DeepBlue,
        DegradationType::DeepGreen,
        DegradationType::Green,
        DegradationType::Blurry,
    ];

    /// Stable identifier used in manifests, preset files and directory names.
    pub fn slug(self) -> &'static str {
        match self {
            DegradationType::Blue => "blue",
            DegradationType::LowLight => "low-light",
            DegradationType::DeepBlue => "deep-blue",
            DegradationType::DeepGreen => "deep-green",
            DegradationType::Green => "green",
            DegradationType::Blurry => "blurry",
        }
    }

    pub fn display_name(self) -> &'static str {
        match self {
            DegradationType::Blue => "Blue",
            DegradationType::LowLight => "Low-Light",
            DegradationType::DeepBlue => "Deep Blue",
            DegradationType::DeepGreen => "Deep Green",
            DegradationType::Green => "Green",
            DegradationType::Blurry => "Blurry",
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for DegradationType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.display_name())
    }
}

impl FromStr for DegradationType {
    type Err = Error;

    /// Accepts slugs and display names, ignoring case, spaces, `-` and `_`.
    fn from_str(s: &str) -> Result<Self> {
        let key: String = s
            .chars()
            .filter(|c| !matches!(c, ' ' | '-' | '_'))
            .flat_map(char::to_lowercase)
            .collect();
        Ok(match key.as_str() {
            "blue" => DegradationType::Blue,
            "lowlight" => DegradationType::LowLight,
            "deepblue" => DegradationType::DeepBlue,
            "deepgreen" => DegradationType::DeepGreen,
            "green" => DegradationType::Green,
            "blurry" => DegradationType::Blurry,
            _ => return Err(Error::UnknownDegradationType(s.to_string())),
        })
    }
}

/// Parameters for one parametric degradation.
///
/// Stages run in a fixed order: veiling cast (per-channel attenuation toward
/// `background` over `depth`), tone curve (`gain * 255 * (I/255)^gamma`),
/// Gaussian blur, optional seeded noise. Stages whose parameters are at
/// their identity values leave the image untouched.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DegradationSpec {
    pub dtype: DegradationType,
    /// Attenuation per unit depth for (r, g, b).
    pub beta: [f64; 3],
    pub background: [u8; 3],
    pub depth: f64,
    pub gamma: f64,
    pub gain: f64,
    pub blur_sigma: f64,
    #[serde(default)]
    pub noise_sigma: f64,
    #[serde(default)]
    pub seed: u64,
}

impl DegradationSpec {
    /// A spec that leaves every image unchanged.
    pub fn identity(dtype: DegradationType) -> Self {
        Self {
            dtype,
            beta: [0.0; 3],
            background: [0; 3],
            depth: 0.0,
            gamma: 1.0,
            gain: 1.0,
            blur_sigma: 0.0,
            noise_sigma: 0.0,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |what: String| Err(Error::InvalidSpec(what));
        if self.beta.iter().any(|b| !(b.is_finite() && *b >= 0.0)) {
            return bad(format!("beta must be finite and >= 0, got {:?}", self.beta));
        }
        if !(self.depth.is_finite() && self.depth >= 0.0) {
            return bad(format!("depth must be finite and >= 0, got {}", self.depth));
        }
        if !(self.gamma.is_finite() && self.gamma > 0.0) {
            return bad(format!("gamma must be > 0, got {}", self.gamma));
        }
        if !(self.gain > 0.0 && self.gain <= 1.0) {
            return bad(format!("gain must lie in (0, 1], got {}", self.gain));
        }
        if !(self.blur_sigma.is_finite() && self.blur_sigma >= 0.0) {
            return bad(format!("blur_sigma must be >= 0, got {}", self.blur_sigma));
        }
        if !(self.noise_sigma.is_finite() && self.noise_sigma >= 0.0) {
            return bad(format!("noise_sigma must be >= 0, got {}", self.noise_sigma));
        }
        Ok(())
    }

    /// Per-channel transmission `exp(-beta * depth)`.
    pub fn transmission(&self) -> [f64; 3] {
        self.beta.map(|b| (-b * self.depth).exp())
    }

    /// Hex SHA-256 of the canonical JSON encoding.
    pub fn digest(&self) -> String {
        let canonical = serde_json::to_vec(self).expect("spec serializes");
        hex::encode(Sha256::digest(&canonical))
    }
}

/// Applies `spec` to `image`. Deterministic: equal inputs give equal bytes.
pub fn apply_degradation(image: &ImageRgb8, spec: &DegradationSpec) -> Result<ImageRgb8> {
    spec.validate()?;
    let (w, h) = (image.width(), image.height());
    let t = spec.transmission();
    let veil: [f64; 3] = std::array::from_fn(|c| spec.background[c] as f64 * (1.0 - t[c]));
    let tone = spec.gamma != 1.0 || spec.gain != 1.0;

    let mut planes: [Vec<f64>; 3] = std::array::from_fn(|_| Vec::with_capacity(image.len()));
    for p in image.pixels() {
        for c in 0..3 {
            let mut v = p[c] as f64 * t[c] + veil[c];
            if tone {
                v = spec.gain * 255.0 * (v / 255.0).powf(spec.gamma);
            }
            planes[c].push(v);
        }
    }

    if spec.blur_sigma > 0.0 {
        gaussian_blur_planes(&mut planes, w, h, spec.blur_sigma);
    }

    if spec.noise_sigma > 0.0 {
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
        let normal = Normal::new(0.0, spec.noise_sigma).expect("sigma validated");
        for i in 0..image.len() {
            for plane in planes.iter_mut() {
                plane[i] += normal.sample(&mut rng);
            }
        }
    }

    let pixels = (0..image.len())
        .map(|i| [to_byte(planes[0][i]), to_byte(planes[1][i]), to_byte(planes[2][i])])
        .collect();
    ImageRgb8::new(w, h, pixels)
}

/// Preset for `dtype` from the built-in preset table.
pub fn default_spec(dtype: DegradationType) -> DegradationSpec {
    Presets::builtin().spec(dtype).clone()
}
