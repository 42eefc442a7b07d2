use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use uwsynth_core::dataset::{
    check_pairing, entropy_filter, tile_and_downsample, validate_manifest, Assembler,
    DatasetManifest, MANIFEST_FILE,
};
use uwsynth_core::eval::{self, render_report, ComparisonMatrix, EvalOptions};
use uwsynth_core::image::list_images;
use uwsynth_core::{
    apply_degradation, DegradationBackend, DegradationType, DirectoryBackend, Error, ImageRgb8,
    ParametricBackend, Presets, Result,
};

use crate::{AssembleArgs, Cli, Command, PRESETS_ENV};

pub fn run(cli: Cli) -> Result<()> {
    let serial = cli.jobs == Some(1);
    match cli.command {
        Command::Prep {
            input,
            out,
            entropy_threshold,
        } => prep(&input, &out, entropy_threshold),
        Command::Degrade {
            dtype,
            preset,
            input,
            out,
        } => degrade(dtype, preset.as_deref(), &input, &out),
        Command::Assemble { common, sampling } => {
            assemble(&common, |a, s| a.sampling(sampling.into()).balanced(s, common.n_total))
        }
        Command::Ablate { dtype, common } => {
            assemble(&common, |a, s| a.single_type(s, dtype, common.n_total))
        }
        Command::Score {
            input,
            reference,
            out,
            details,
            model,
            train_set,
            test_set,
            resize,
        } => {
            require_dir(&input)?;
            if let Some(r) = &reference {
                require_dir(r)?;
            }
            let options = EvalOptions {
                resize,
                parallel: !serial,
            };
            let ev = eval::evaluate_directory(&input, reference.as_deref(), &options)?;
            for f in &ev.failures {
                eprintln!("warning: skipped {}: {}", f.file_name, f.message);
            }
            let test_set = test_set.unwrap_or_else(|| dir_name(&input));
            let cell = ev.to_cell(&model, &train_set, &test_set);
            ComparisonMatrix::from_cells(vec![cell])?.save(&out)?;
            if let Some(path) = details {
                let file = fs::File::create(&path).map_err(|e| io_error(&path, e))?;
                ev.write_details(std::io::BufWriter::new(file))?;
            }
            eprintln!(
                "scored {} images ({} skipped), mean UCIQE {:.4}",
                ev.n_images(),
                ev.failures.len(),
                ev.mean.total
            );
            Ok(())
        }
        Command::Report { cells, format, out } => {
            let mut merged: Option<ComparisonMatrix> = None;
            for path in &cells {
                let m = ComparisonMatrix::load(path)?;
                merged = Some(match merged {
                    Some(acc) => acc.merge(m)?,
                    None => m,
                });
            }
            let matrix = eval::complete_totals(&merged.expect("clap requires one cell file"))?;
            let text = render_report(&matrix, format)?;
            match out {
                Some(path) => write_file(&path, text.as_bytes()),
                None => {
                    print!("{text}");
                    Ok(())
                }
            }
        }
        Command::Validate { dataset, pairing } => {
            require_dir(&dataset)?;
            let manifest = DatasetManifest::load(&dataset.join(MANIFEST_FILE))?;
            let report = validate_manifest(&manifest, &dataset);
            let mut problems = report.violations.len();
            if !report.is_ok() {
                eprint!("{report}");
            }
            if pairing {
                let bad = check_pairing(&manifest, &dataset)?;
                for i in &bad {
                    eprintln!("record {i}: degraded image does not match its reference and spec");
                }
                problems += bad.len();
            }
            if problems > 0 {
                return Err(Error::Manifest {
                    path: dataset.join(MANIFEST_FILE).display().to_string(),
                    line: 0,
                    message: format!("{problems} problem(s) found"),
                });
            }
            eprintln!("{}: {} records ok", manifest.name, manifest.records.len());
            Ok(())
        }
    }
}

fn prep(input: &Path, out: &Path, threshold: f64) -> Result<()> {
    require_dir(input)?;
    let files = list_images(input)?;
    fs::create_dir_all(out).map_err(|e| io_error(out, e))?;
    let results: Vec<Result<(usize, usize)>> = files
        .par_iter()
        .map(|path| {
            let image = ImageRgb8::load(path)?;
            let tiles = tile_and_downsample(&stem(path), &image)?;
            let mut kept = 0;
            for tile in &tiles {
                if entropy_filter(tile, threshold) {
                    tile.image.save_png(out.join(tile.file_name()))?;
                    kept += 1;
                }
            }
            Ok((kept, tiles.len()))
        })
        .collect();
    let (mut kept, mut total, mut skipped) = (0, 0, 0);
    for (path, r) in files.iter().zip(results) {
        match r {
            Ok((k, t)) => {
                kept += k;
                total += t;
            }
            Err(e @ (Error::TooSmall { .. } | Error::Decode { .. })) => {
                eprintln!("warning: skipped {}: {e}", path.display());
                skipped += 1;
            }
            Err(e) => return Err(e),
        }
    }
    eprintln!(
        "kept {kept} of {total} tiles from {} images ({skipped} skipped)",
        files.len() - skipped
    );
    Ok(())
}

fn degrade(dtype: DegradationType, preset: Option<&str>, input: &Path, out: &Path) -> Result<()> {
    let presets = load_presets(preset)?;
    let spec = presets.spec(dtype);
    if input.is_dir() {
        let files = list_images(input)?;
        files
            .par_iter()
            .map(|p| {
                let img = apply_degradation(&ImageRgb8::load(p)?, spec)?;
                img.save_png(out.join(format!("{}.png", stem(p))))
            })
            .collect::<Result<Vec<()>>>()?;
        eprintln!("degraded {} images as {dtype}", files.len());
        Ok(())
    } else {
        apply_degradation(&ImageRgb8::load(input)?, spec)?.save_png(out)
    }
}

fn assemble(
    args: &AssembleArgs,
    build: impl FnOnce(Assembler<'_>, &[PathBuf]) -> Result<DatasetManifest>,
) -> Result<()> {
    require_dir(&args.sources)?;
    let backend: Box<dyn DegradationBackend> = match args.backend.strip_prefix("dir:") {
        Some(root) => {
            require_dir(Path::new(root))?;
            Box::new(DirectoryBackend::new(root))
        }
        None if args.backend == "parametric" => {
            Box::new(ParametricBackend::new(load_presets(args.preset.as_deref())?.clone()))
        }
        None => {
            return Err(Error::InvalidSpec(format!(
                "unknown backend {:?} (expected parametric or dir:ROOT)",
                args.backend
            )))
        }
    };
    let sources = list_images(&args.sources)?;
    let name = args.name.clone().unwrap_or_else(|| dir_name(&args.out));
    let assembler = Assembler::new(backend.as_ref(), &args.out).name(name).seed(args.seed);
    let manifest_path = assembler.manifest_path();
    let manifest = build(assembler, &sources)?;
    let counts: Vec<String> = manifest
        .per_type_counts
        .iter()
        .filter(|(_, &n)| n > 0)
        .map(|(t, n)| format!("{t}: {n}"))
        .collect();
    eprintln!(
        "wrote {} pairs ({}) to {}",
        manifest.records.len(),
        counts.join(", "),
        manifest_path.display()
    );
    Ok(())
}

/// `--preset FILE` wins; otherwise the environment override; otherwise builtin.
fn load_presets(preset: Option<&str>) -> Result<Presets> {
    match preset {
        Some(p) if p != "default" => Presets::load(Path::new(p)),
        _ => match std::env::var_os(PRESETS_ENV) {
            Some(p) if !p.is_empty() => Presets::load(Path::new(&p)),
            _ => Ok(Presets::builtin().clone()),
        },
    }
}

fn require_dir(path: &Path) -> Result<()> {
    if path.is_dir() {
        Ok(())
    } else {
        Err(io_error(
            path,
            std::io::Error::new(std::io::ErrorKind::NotFound, "not a directory"),
        ))
    }
}

fn io_error(path: &Path, source: std::io::Error) -> Error {
    Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|e| io_error(parent, e))?;
    }
    fs::write(path, bytes).map_err(|e| io_error(path, e))
}

fn stem(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}

fn dir_name(path: &Path) -> String {
    path.canonicalize()
        .ok()
        .and_then(|p| p.file_name().map(|s| s.to_string_lossy().into_owned()))
        .unwrap_or_else(|| "dataset".to_string())
}
