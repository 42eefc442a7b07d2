//! Batch scoring and aggregation into model × training set × test set
//! comparison matrices.

mod analysis;
mod harness;
mod matrix;
mod report;

pub mod fixtures;

pub use analysis::{complete_totals, count_wins, reconstruct_totals, total_discrepancies, winners_per_group, GroupWinner};
pub use harness::{evaluate_directory, DirectoryEval, EvalOptions, ImageFailure, ImageScore};
pub use matrix::{CellKey, ComparisonMatrix, EvalCell};
pub use report::{render_report, ReportFormat};
