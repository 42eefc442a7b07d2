use std::collections::BTreeSet;
use std::io::Write;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use super::matrix::EvalCell;
use crate::error::{Error, Result};
use crate::image::{list_images, ImageRgb8};
use crate::metrics::{self, FullRefScore, UciqeScore};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EvalOptions {
    /// Resize every image (and reference) to `n`x`n` before scoring.
    pub resize: Option<usize>,
    /// Score images on the current rayon pool. `false` runs a plain loop.
    pub parallel: bool,
}

impl Default for EvalOptions {
    fn default() -> Self {
        Self {
            resize: None,
            parallel: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ImageScore {
    pub file_name: String,
    pub uciqe: UciqeScore,
    pub full_ref: Option<FullRefScore>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ImageFailure {
    pub file_name: String,
    pub message: String,
}

/// Per-image scores (sorted by file name) and their means.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectoryEval {
    pub images: Vec<ImageScore>,
    pub failures: Vec<ImageFailure>,
    /// Componentwise arithmetic means; `total` is recombined from them.
    pub mean: UciqeScore,
    pub mean_full_ref: Option<FullRefScore>,
}

impl DirectoryEval {
    pub fn n_images(&self) -> usize {
        self.images.len()
    }

    pub fn to_cell(&self, model: &str, training_set: &str, test_set: &str) -> EvalCell {
        let mut cell = EvalCell::new(model, training_set, test_set).with_score(self.mean);
        cell.n_images = Some(self.images.len());
        if let Some(fr) = self.mean_full_ref {
            cell.psnr_db = Some(fr.psnr_db);
            cell.ssim = Some(fr.ssim);
        }
        cell
    }

    /// CSV with columns filename, sigma_c, conl, mu_s, total, psnr, ssim.
    pub fn write_details(&self, out: impl Write) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let err = |e: csv::Error| Error::Table {
            path: "<details>".into(),
            message: e.to_string(),
        };
        w.write_record(["filename", "sigma_c", "conl", "mu_s", "total", "psnr", "ssim"])
            .map_err(err)?;
        for s in &self.images {
            let (psnr, ssim) = match s.full_ref {
                Some(fr) => (fr.psnr_db.to_string(), fr.ssim.to_string()),
                None => (String::new(), String::new()),
            };
            w.write_record([
                s.file_name.clone(),
                s.uciqe.sigma_c.to_string(),
                s.uciqe.conl.to_string(),
                s.uciqe.mu_s.to_string(),
                s.uciqe.total.to_string(),
                psnr,
                ssim,
            ])
            .map_err(err)?;
        }
        w.flush().map_err(|e| err(e.into()))?;
        Ok(())
    }
}

fn file_name(p: &Path) -> String {
    p.file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default()
}

fn load(path: &Path, resize: Option<usize>) -> Result<ImageRgb8> {
    let img = ImageRgb8::load(path)?;
    match resize {
        Some(n) => img.resize(n, n),
        None => Ok(img),
    }
}

fn score_one(
    path: &Path,
    reference_dir: Option<&Path>,
    resize: Option<usize>,
) -> std::result::Result<ImageScore, ImageFailure> {
    let name = file_name(path);
    let fail = |e: Error| ImageFailure {
        file_name: name.clone(),
        message: e.to_string(),
    };
    let image = load(path, resize).map_err(fail)?;
    let full_ref = match reference_dir {
        Some(dir) => {
            let reference = load(&dir.join(&name), resize).map_err(fail)?;
            Some(metrics::full_reference(&reference, &image).map_err(fail)?)
        }
        None => None,
    };
    Ok(ImageScore {
        uciqe: metrics::uciqe(&image),
        full_ref,
        file_name: name,
    })
}

/// Scores every image directly inside `dir`.
///
/// Undecodable files are recorded in `failures` and skipped. With a
/// reference directory, both directories must hold the same file names.
/// Means are reduced serially in file-name order, so the result does not
/// depend on `options.parallel` or on the pool size.
pub fn evaluate_directory(
    dir: &Path,
    reference_dir: Option<&Path>,
    options: &EvalOptions,
) -> Result<DirectoryEval> {
    let paths = list_images(dir)?;
    if paths.is_empty() {
        return Err(Error::EmptyDirectory(dir.to_path_buf()));
    }
    if let Some(rdir) = reference_dir {
        check_reference_names(&paths, &list_images(rdir)?)?;
    }

    let results: Vec<std::result::Result<ImageScore, ImageFailure>> = if options.parallel {
        paths
            .par_iter()
            .map(|p| score_one(p, reference_dir, options.resize))
            .collect()
    } else {
        paths
            .iter()
            .map(|p| score_one(p, reference_dir, options.resize))
            .collect()
    };

    let mut images = Vec::with_capacity(results.len());
    let mut failures = Vec::new();
    for r in results {
        match r {
            Ok(s) => images.push(s),
            Err(f) => failures.push(f),
        }
    }
    if images.is_empty() {
        return Err(Error::EmptyDirectory(dir.to_path_buf()));
    }

    let n = images.len() as f64;
    let (mut sc, mut cl, mut ms) = (0.0, 0.0, 0.0);
    for s in &images {
        sc += s.uciqe.sigma_c;
        cl += s.uciqe.conl;
        ms += s.uciqe.mu_s;
    }
    let mean = UciqeScore::from_components(sc / n, cl / n, ms / n);

    let mean_full_ref = reference_dir.map(|_| {
        let (mut p, mut s) = (0.0, 0.0);
        for fr in images.iter().filter_map(|i| i.full_ref) {
            p += fr.psnr_db;
            s += fr.ssim;
        }
        FullRefScore {
            psnr_db: p / n,
            ssim: s / n,
        }
    });

    Ok(DirectoryEval {
        images,
        failures,
        mean,
        mean_full_ref,
    })
}

fn check_reference_names(tests: &[PathBuf], refs: &[PathBuf]) -> Result<()> {
    let a: BTreeSet<String> = tests.iter().map(|p| file_name(p)).collect();
    let b: BTreeSet<String> = refs.iter().map(|p| file_name(p)).collect();
    if a == b {
        return Ok(());
    }
    let only_test: Vec<&String> = a.difference(&b).collect();
    let only_ref: Vec<&String> = b.difference(&a).collect();
    Err(Error::ReferenceMismatch(format!(
        "without reference: {only_test:?}; reference only: {only_ref:?}"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write(dir: &Path, name: &str, img: &ImageRgb8) {
        img.save_png(dir.join(name)).unwrap();
    }

    fn colorful(seed: u8) -> ImageRgb8 {
        ImageRgb8::from_fn(16, 16, |x, y| {
            [(x * 16) as u8 ^ seed, (y * 16) as u8, ((x + y) * 8) as u8 ^ seed.rotate_left(3)]
        })
        .unwrap()
    }

    #[test]
    fn copies_of_one_image_average_to_its_score() {
        let dir = tempfile::tempdir().unwrap();
        let img = colorful(3);
        for i in 0..5 {
            write(dir.path(), &format!("{i}.png"), &img);
        }
        let ev = evaluate_directory(dir.path(), None, &EvalOptions::default()).unwrap();
        let single = metrics::uciqe(&img);
        assert_eq!(ev.n_images(), 5);
        assert!((ev.mean.sigma_c - single.sigma_c).abs() < 1e-15);
        assert!((ev.mean.total - single.total).abs() < 1e-15);
    }

    #[test]
    fn two_image_mean_and_detail_rows() {
        let dir = tempfile::tempdir().unwrap();
        let (a, b) = (colorful(1), colorful(200));
        write(dir.path(), "a.png", &a);
        write(dir.path(), "b.png", &b);
        std::fs::write(dir.path().join("notes.txt"), "ignored").unwrap();
        let ev = evaluate_directory(dir.path(), None, &EvalOptions::default()).unwrap();
        let (ta, tb) = (metrics::uciqe(&a).total, metrics::uciqe(&b).total);
        assert!((ev.mean.total - (ta + tb) / 2.0).abs() < 1e-12);
        let mut buf = Vec::new();
        ev.write_details(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 3);
        assert!(text.starts_with("filename,sigma_c,conl,mu_s,total,psnr,ssim"));
    }

    #[test]
    fn corrupt_files_are_counted_not_fatal() {
        let dir = tempfile::tempdir().unwrap();
        write(dir.path(), "good.png", &colorful(9));
        std::fs::write(dir.path().join("bad.png"), b"not a png").unwrap();
        let ev = evaluate_directory(dir.path(), None, &EvalOptions::default()).unwrap();
        assert_eq!(ev.n_images(), 1);
        assert_eq!(ev.failures.len(), 1);
        assert_eq!(ev.failures[0].file_name, "bad.png");
    }

    #[test]
    fn empty_directory_is_an_error() {
        let dir = tempfile::tempdir().unwrap();
        assert!(matches!(
            evaluate_directory(dir.path(), None, &EvalOptions::default()),
            Err(Error::EmptyDirectory(_))
        ));
        std::fs::write(dir.path().join("bad.png"), b"x").unwrap();
        assert!(evaluate_directory(dir.path(), None, &EvalOptions::default()).is_err());
    }

    #[test]
    fn references_are_matched_by_name() {
        let test = tempfile::tempdir().unwrap();
        let refs = tempfile::tempdir().unwrap();
        write(test.path(), "x.png", &colorful(1));
        write(refs.path(), "x.png", &colorful(1));
        let ev = evaluate_directory(test.path(), Some(refs.path()), &EvalOptions::default()).unwrap();
        let fr = ev.mean_full_ref.unwrap();
        assert_eq!(fr.psnr_db, metrics::PSNR_CAP_DB);
        assert_eq!(fr.ssim, 1.0);
        let cell = ev.to_cell("m", "tr", "te");
        assert_eq!(cell.psnr_db, Some(metrics::PSNR_CAP_DB));

        write(refs.path(), "y.png", &colorful(2));
        let err = evaluate_directory(test.path(), Some(refs.path()), &EvalOptions::default()).unwrap_err();
        assert!(err.to_string().contains("y.png"));
    }

    #[test]
    fn resize_option() {
        let dir = tempfile::tempdir().unwrap();
        write(dir.path(), "a.png", &colorful(4));
        let opts = EvalOptions {
            resize: Some(32),
            parallel: false,
        };
        assert!(evaluate_directory(dir.path(), None, &opts).is_ok());
    }
}
