//! Desk-scale tooling for synthetic underwater image datasets.
//!
//! The crate covers four stages:
//!
//! * [`color`]: sRGB to CIELab/HSV planes.
//! * [`metrics`]: UCIQE and its components, PSNR, SSIM.
//! * [`degrade`]: parametric synthesis of six underwater degradation types
//!   and a backend trait for ingesting externally generated data.
//! * [`dataset`] and [`eval`]: paired dataset assembly with manifests, and
//!   batch scoring aggregated into model × training set × test set matrices.

pub mod color;
pub mod dataset;
pub mod degrade;
pub mod error;
pub mod eval;
pub mod image;
pub mod metrics;

pub use color::{srgb_to_hsv, srgb_to_lab, HsvPlanes, LabPlanes};
pub use degrade::{
    apply_degradation, default_spec, DegradationBackend, DegradationSpec, DegradationType,
    DirectoryBackend, ParametricBackend, Presets,
};
pub use error::{Error, ErrorClass, Result};
pub use image::ImageRgb8;
pub use metrics::{uciqe, FullRefScore, UciqeScore};
