use std::path::PathBuf;

use thiserror::Error;

/// Coarse error classes, used by front ends to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Io,
    Validation,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: cannot decode image: {message}")]
    Decode { path: PathBuf, message: String },

    #[error("{path}: cannot encode image: {message}")]
    Encode { path: PathBuf, message: String },

    #[error("dimension mismatch: reference is {ref_width}x{ref_height}, test is {test_width}x{test_height}")]
    DimensionMismatch {
        ref_width: usize,
        ref_height: usize,
        test_width: usize,
        test_height: usize,
    },

    #[error("image is {width}x{height}, at least {min_width}x{min_height} is required")]
    TooSmall {
        width: usize,
        height: usize,
        min_width: usize,
        min_height: usize,
    },

    #[error("invalid image: {0}")]
    InvalidImage(String),

    #[error("invalid degradation spec: {0}")]
    InvalidSpec(String),

    #[error("unknown degradation type {0:?} (expected one of: Blue, Low-Light, Deep Blue, Deep Green, Green, Blurry)")]
    UnknownDegradationType(String),

    #[error("preset file {path}: {message}")]
    Preset { path: String, message: String },

    #[error("no pre-generated image for ({dtype}, {name}): expected {expected}")]
    MissingDegraded {
        dtype: String,
        name: String,
        expected: PathBuf,
    },

    #[error("n_total = {0} is not divisible by 6")]
    NotDivisible(usize),
    #[error("a dataset needs at least one pair")]
    EmptyDataset,

    #[error("not enough sources: {needed} required, {available} available")]
    InsufficientSources { needed: usize, available: usize },

    #[error("duplicate source name {0:?}")]
    DuplicateSource(String),

    #[error("backend failed for ({dtype}, {source_name}): {cause}")]
    Backend {
        dtype: String,
        source_name: String,
        #[source]
        cause: Box<Error>,
    },

    #[error("manifest {path}, line {line}: {message}")]
    Manifest {
        path: String,
        line: usize,
        message: String,
    },

    #[error("no decodable images in {0}")]
    EmptyDirectory(PathBuf),

    #[error("reference mismatch: {0}")]
    ReferenceMismatch(String),

    #[error("missing groups in comparison matrix: {0}")]
    MissingGroups(String),

    #[error("cell ({model}, {training_set}, {test_set}) has no {component}")]
    MissingComponent {
        model: String,
        training_set: String,
        test_set: String,
        component: &'static str,
    },

    #[error("duplicate cell ({0}, {1}, {2})")]
    DuplicateCell(String, String, String),

    #[error("unknown report format {0:?} (expected csv or table)")]
    UnknownFormat(String),

    #[error("{path}: {message}")]
    Table { path: String, message: String },

    #[error("comparison matrix is empty")]
    EmptyMatrix,
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Io { .. } | Error::Decode { .. } | Error::Encode { .. } => ErrorClass::Io,
            Error::Backend { cause, .. } => cause.class(),
            _ => ErrorClass::Validation,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
