//! Published benchmark tables shipped as fixtures: mean UCIQE totals and
//! their components for 6 enhancement models × 5 training sets × 3 test
//! sets, all to four decimals.

use super::matrix::ComparisonMatrix;

pub const TOTALS_CSV: &str = include_str!("../../fixtures/benchmark_totals.csv");
pub const COMPONENTS_CSV: &str = include_str!("../../fixtures/benchmark_components.csv");

/// The two training sets built from in-air references.
pub const SYNTHETIC_TRAINING_SETS: [&str; 2] = ["UWImgNetSD", "UWNature"];

/// Number of (model, test set) groups in which a synthetic training set
/// attains the highest total.
pub const SYNTHETIC_WINS: usize = 14;

/// Tolerance for recombining four-decimal components into totals.
pub const RECONSTRUCTION_TOLERANCE: f64 = 5e-4;

pub fn totals() -> ComparisonMatrix {
    ComparisonMatrix::read_csv(TOTALS_CSV.as_bytes(), "benchmark_totals.csv")
        .expect("fixture parses")
}

pub fn components() -> ComparisonMatrix {
    ComparisonMatrix::read_csv(COMPONENTS_CSV.as_bytes(), "benchmark_components.csv")
        .expect("fixture parses")
}
