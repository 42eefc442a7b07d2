use std::path::{Path, PathBuf};

use super::{apply_degradation, DegradationSpec, DegradationType, Presets};
use crate::error::{Error, Result};
use crate::image::ImageRgb8;

/// Output of a backend call. `spec` is set when the result was synthesized
/// from known parameters.
#[derive(Debug, Clone)]
pub struct Degraded {
    pub image: ImageRgb8,
    pub spec: Option<DegradationSpec>,
}

/// Produces the degraded counterpart of a source image for one type.
///
/// Implementations are shared read-only across worker threads.
pub trait DegradationBackend: Send + Sync {
    /// Provenance string recorded in manifests.
    fn descriptor(&self) -> String;

    /// `source_name` is the source file name, used by lookup-based backends.
    fn degrade(
        &self,
        source_name: &str,
        image: &ImageRgb8,
        dtype: DegradationType,
    ) -> Result<Degraded>;
}

/// Synthesizes degradations from a preset table.
#[derive(Debug, Clone)]
pub struct ParametricBackend {
    presets: Presets,
}

impl ParametricBackend {
    pub fn new(presets: Presets) -> Self {
        Self { presets }
    }

    pub fn builtin() -> Self {
        Self::new(Presets::builtin().clone())
    }

    pub fn presets(&self) -> &Presets {
        &self.presets
    }
}

impl DegradationBackend for ParametricBackend {
    fn descriptor(&self) -> String {
        format!(
            "parametric:v{}:{}",
            self.presets.version(),
            &self.presets.digest()[..16]
        )
    }

    fn degrade(&self, _: &str, image: &ImageRgb8, dtype: DegradationType) -> Result<Degraded> {
        let spec = self.presets.spec(dtype);
        Ok(Degraded {
            image: apply_degradation(image, spec)?,
            spec: Some(spec.clone()),
        })
    }
}

/// Reads pre-generated degradations from `root/<type-slug>/<file name>`.
///
/// A lookup tries the exact source file name first, then the same stem with
/// a `.png` extension.
#[derive(Debug, Clone)]
pub struct DirectoryBackend {
    root: PathBuf,
}

impl DirectoryBackend {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        Self { root: root.into() }
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn resolve(&self, source_name: &str, dtype: DegradationType) -> Result<PathBuf> {
        let dir = self.root.join(dtype.slug());
        let exact = dir.join(source_name);
        if exact.is_file() {
            return Ok(exact);
        }
        if let Some(stem) = Path::new(source_name).file_stem() {
            let png = dir.join(stem).with_extension("png");
            if png.is_file() {
                return Ok(png);
            }
        }
        Err(Error::MissingDegraded {
            dtype: dtype.slug().to_string(),
            name: source_name.to_string(),
            expected: exact,
        })
    }
}

impl DegradationBackend for DirectoryBackend {
    fn descriptor(&self) -> String {
        format!("dir:{}", self.root.display())
    }

    fn degrade(
        &self,
        source_name: &str,
        image: &ImageRgb8,
        dtype: DegradationType,
    ) -> Result<Degraded> {
        let path = self.resolve(source_name, dtype)?;
        let found = ImageRgb8::load(&path)?;
        if (found.width(), found.height()) != (image.width(), image.height()) {
            return Err(Error::InvalidImage(format!(
                "{} is {}x{}, source {source_name} is {}x{}",
                path.display(),
                found.width(),
                found.height(),
                image.width(),
                image.height()
            )));
        }
        Ok(Degraded {
            image: found,
            spec: None,
        })
    }
}
