//! `uwsynth` command-line front end.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use uwsynth_core::dataset::{SamplingMode, DEFAULT_ENTROPY_THRESHOLD};
use uwsynth_core::eval::ReportFormat;
use uwsynth_core::{DegradationType, ErrorClass};

/// Seed used when `--seed` is not given.
pub const DEFAULT_SEED: u64 = 42;

/// Environment variable naming a preset file to use instead of the builtin
/// presets when `--preset` is absent or `default`.
pub const PRESETS_ENV: &str = "UWSYNTH_PRESETS";

const TYPE_NAMES: &str = "Blue, Low-Light, Deep Blue, Deep Green, Green, Blurry";

const EXIT_USAGE: u8 = 2;
const EXIT_IO: u8 = 3;
const EXIT_VALIDATION: u8 = 4;

#[derive(Parser, Debug)]
#[command(
    name = "uwsynth",
    version,
    about = "Synthesize paired underwater datasets and score enhancement results",
    after_help = "Degradation types: Blue, Low-Light, Deep Blue, Deep Green, Green, Blurry"
)]
pub struct Cli {
    /// Worker threads (default: available processors). 1 runs serially.
    #[arg(long, global = true, value_name = "N")]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Cut 1024x1024 tiles, downsample to 256x256, drop low-entropy tiles.
    Prep {
        #[arg(long = "in", value_name = "DIR")]
        input: PathBuf,
        #[arg(long, value_name = "DIR")]
        out: PathBuf,
        /// Minimum gray-level entropy in bits for a tile to be kept.
        #[arg(long, value_name = "BITS", default_value_t = DEFAULT_ENTROPY_THRESHOLD)]
        entropy_threshold: f64,
    },
    /// Apply one parametric degradation to an image or a directory of images.
    Degrade {
        #[arg(long = "type", value_name = "NAME", help = type_help())]
        dtype: DegradationType,
        /// Preset TOML file, or `default`.
        #[arg(long, value_name = "FILE|default")]
        preset: Option<String>,
        #[arg(long = "in", value_name = "PATH")]
        input: PathBuf,
        #[arg(long, value_name = "PATH")]
        out: PathBuf,
    },
    /// Build a balanced mixed dataset over all six types.
    Assemble {
        #[command(flatten)]
        common: AssembleArgs,
        #[arg(long, value_enum, default_value_t = Sampling::Partition)]
        sampling: Sampling,
    },
    /// Build a single-type dataset for ablation runs.
    Ablate {
        #[arg(long = "type", value_name = "NAME", help = type_help())]
        dtype: DegradationType,
        #[command(flatten)]
        common: AssembleArgs,
    },
    /// Score every image in a directory and write one result cell.
    Score {
        #[arg(long, value_name = "DIR")]
        input: PathBuf,
        /// Directory of references with matching file names (adds PSNR/SSIM).
        #[arg(long, value_name = "DIR")]
        reference: Option<PathBuf>,
        /// Cell file; `.jsonl` writes JSON Lines, anything else CSV.
        #[arg(long, value_name = "FILE")]
        out: PathBuf,
        /// Per-image CSV.
        #[arg(long, value_name = "FILE")]
        details: Option<PathBuf>,
        #[arg(long, default_value = "unlabeled")]
        model: String,
        #[arg(long, default_value = "unlabeled")]
        train_set: String,
        /// Defaults to the input directory name.
        #[arg(long)]
        test_set: Option<String>,
        /// Resize to NxN before scoring (256 when given without a value).
        #[arg(long, value_name = "N", num_args = 0..=1, default_missing_value = "256")]
        resize: Option<usize>,
    },
    /// Merge cell files into a comparison report.
    Report {
        #[arg(long, value_name = "FILE", num_args = 1.., required = true)]
        cells: Vec<PathBuf>,
        #[arg(long, value_name = "csv|table", default_value = "table")]
        format: ReportFormat,
        /// Defaults to standard output.
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Check a dataset directory against its manifest.
    Validate {
        #[arg(long, value_name = "DIR")]
        dataset: PathBuf,
        /// Also re-derive parametric pairs from their references.
        #[arg(long)]
        pairing: bool,
    },
}

#[derive(Args, Debug)]
struct AssembleArgs {
    #[arg(long, value_name = "DIR")]
    sources: PathBuf,
    /// `parametric`, or `dir:ROOT` for pre-generated images under ROOT/<type>/.
    #[arg(long, value_name = "parametric|dir:ROOT", default_value = "parametric")]
    backend: String,
    #[arg(long, value_name = "N")]
    n_total: usize,
    #[arg(long, value_name = "S", default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, value_name = "DIR")]
    out: PathBuf,
    /// Preset TOML file for the parametric backend, or `default`.
    #[arg(long, value_name = "FILE|default")]
    preset: Option<String>,
    /// Dataset name recorded in the manifest (default: output directory name).
    #[arg(long)]
    name: Option<String>,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Sampling {
    Partition,
    Shared,
}

impl From<Sampling> for SamplingMode {
    fn from(s: Sampling) -> Self {
        match s {
            Sampling::Partition => SamplingMode::Partition,
            Sampling::Shared => SamplingMode::Shared,
        }
    }
}

fn type_help() -> String {
    format!("Degradation type: {TYPE_NAMES}")
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            eprintln!("error: --jobs must be at least 1");
            return ExitCode::from(EXIT_USAGE);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            eprintln!("error: cannot start worker pool: {e}");
            return ExitCode::from(EXIT_IO);
        }
    }
    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e.class() {
                ErrorClass::Io => EXIT_IO,
                ErrorClass::Validation => EXIT_VALIDATION,
            })
        }
    }
}
