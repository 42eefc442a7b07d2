use super::matrix::{CellKey, ComparisonMatrix, EvalCell};
use crate::error::{Error, Result};
use crate::metrics::UciqeScore;

/// Best training set for one (model, test set) group.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupWinner {
    pub model: String,
    pub test_set: String,
    pub training_set: String,
    pub total: f64,
    /// Set when several training sets share the maximum; the
    /// lexicographically smallest id is reported.
    pub tie: bool,
}

/// Argmax of the UCIQE total over training sets for every (model, test set)
/// pair of the matrix axes, in axis order.
pub fn winners_per_group(matrix: &ComparisonMatrix) -> Result<Vec<GroupWinner>> {
    let mut missing = Vec::new();
    let mut winners = Vec::new();
    for model in matrix.models() {
        for test_set in matrix.test_sets() {
            let group: Vec<&EvalCell> = matrix
                .cells()
                .iter()
                .filter(|c| &c.model == model && &c.test_set == test_set)
                .collect();
            if group.is_empty() {
                for tr in matrix.training_sets() {
                    missing.push(format!("({model}, {tr}, {test_set})"));
                }
                continue;
            }
            let mut best: Option<(f64, &str)> = None;
            let mut tie = false;
            for c in &group {
                let total = c.total.ok_or_else(|| missing_component(c, "total"))?;
                match best {
                    None => best = Some((total, &c.training_set)),
                    Some((bt, _)) if total > bt => {
                        best = Some((total, &c.training_set));
                        tie = false;
                    }
                    Some((bt, bid)) if total == bt => {
                        tie = true;
                        if c.training_set.as_str() < bid {
                            best = Some((bt, &c.training_set));
                        }
                    }
                    _ => {}
                }
            }
            let (total, training_set) = best.expect("group is non-empty");
            winners.push(GroupWinner {
                model: model.clone(),
                test_set: test_set.clone(),
                training_set: training_set.to_string(),
                total,
                tie,
            });
        }
    }
    if !missing.is_empty() {
        return Err(Error::MissingGroups(missing.join(", ")));
    }
    Ok(winners)
}

/// Number of groups won by any of `training_sets`.
pub fn count_wins(winners: &[GroupWinner], training_sets: &[&str]) -> usize {
    winners
        .iter()
        .filter(|w| training_sets.contains(&w.training_set.as_str()))
        .count()
}

fn missing_component(c: &EvalCell, component: &'static str) -> Error {
    Error::MissingComponent {
        model: c.model.clone(),
        training_set: c.training_set.clone(),
        test_set: c.test_set.clone(),
        component,
    }
}

/// Replaces every cell's total with the weighted sum of its components.
pub fn reconstruct_totals(matrix: &ComparisonMatrix) -> Result<ComparisonMatrix> {
    let cells = matrix
        .cells()
        .iter()
        .map(|c| {
            let sigma_c = c.sigma_c.ok_or_else(|| missing_component(c, "sigma_c"))?;
            let conl = c.conl.ok_or_else(|| missing_component(c, "conl"))?;
            let mu_s = c.mu_s.ok_or_else(|| missing_component(c, "mu_s"))?;
            let mut out = c.clone();
            out.total = Some(UciqeScore::from_components(sigma_c, conl, mu_s).total);
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?;
    ComparisonMatrix::from_cells(cells)
}

/// Fills in the total of every cell that has all three components but no
/// total. Cells that already carry a total are left as they are.
pub fn complete_totals(matrix: &ComparisonMatrix) -> Result<ComparisonMatrix> {
    let cells = matrix
        .cells()
        .iter()
        .map(|c| {
            let mut out = c.clone();
            if out.total.is_none() {
                out.total = c.score().map(|s| s.total);
            }
            out
        })
        .collect();
    ComparisonMatrix::from_cells(cells)
}

/// Cells present in both matrices whose totals differ by more than `tol`,
/// as `(key, left, right)`. Cells missing from `right` or lacking a total on
/// either side are reported with NaN in place of the missing value.
pub fn total_discrepancies(
    left: &ComparisonMatrix,
    right: &ComparisonMatrix,
    tol: f64,
) -> Vec<(CellKey, f64, f64)> {
    let mut out = Vec::new();
    for c in left.ordered_cells() {
        let a = c.total.unwrap_or(f64::NAN);
        let b = right
            .get(&c.model, &c.training_set, &c.test_set)
            .and_then(|o| o.total)
            .unwrap_or(f64::NAN);
        let agrees = (a - b).abs() <= tol;
        if !agrees {
            out.push((c.key(), a, b));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn group(values: &[(&str, f64)]) -> ComparisonMatrix {
        ComparisonMatrix::from_cells(
            values
                .iter()
                .map(|&(tr, v)| EvalCell::new("UWCNN", tr, "U45").with_total(v))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn picks_the_maximum() {
        let m = group(&[
            ("UIEB", 0.5514),
            ("LSUI", 0.5390),
            ("EUVP", 0.5369),
            ("UWImgNetSD", 0.5612),
            ("UWNature", 0.5485),
        ]);
        let w = winners_per_group(&m).unwrap();
        assert_eq!(w.len(), 1);
        assert_eq!(w[0].training_set, "UWImgNetSD");
        assert!(!w[0].tie);
        assert_eq!(count_wins(&w, &["UWImgNetSD", "UWNature"]), 1);
    }

    #[test]
    fn ties_go_to_smallest_id_and_are_flagged() {
        let m = group(&[("c", 0.4), ("a", 0.4), ("b", 0.4)]);
        let w = winners_per_group(&m).unwrap();
        assert_eq!(w[0].training_set, "a");
        assert!(w[0].tie);
        // a tie below the maximum does not count
        let m = group(&[("c", 0.4), ("a", 0.4), ("b", 0.5)]);
        let w = winners_per_group(&m).unwrap();
        assert_eq!(w[0].training_set, "b");
        assert!(!w[0].tie);
    }

    #[test]
    fn missing_groups_are_listed() {
        let m = ComparisonMatrix::from_cells(vec![
            EvalCell::new("A", "x", "T1").with_total(0.1),
            EvalCell::new("B", "x", "T2").with_total(0.1),
        ])
        .unwrap();
        let err = winners_per_group(&m).unwrap_err().to_string();
        assert!(err.contains("(A, x, T2)") && err.contains("(B, x, T1)"), "{err}");
    }

    #[test]
    fn missing_total_is_an_error() {
        let m = ComparisonMatrix::from_cells(vec![EvalCell::new("A", "x", "T")]).unwrap();
        assert!(matches!(winners_per_group(&m), Err(Error::MissingComponent { component: "total", .. })));
    }

    #[test]
    fn reconstruction() {
        let mut c = EvalCell::new("WF-Diff", "UWImgNetSD", "U45");
        c.sigma_c = Some(0.3400);
        c.conl = Some(0.7952);
        c.mu_s = Some(0.8374);
        let mut zero = EvalCell::new("m", "z", "t");
        zero.sigma_c = Some(0.0);
        zero.conl = Some(0.0);
        zero.mu_s = Some(0.0);
        let m = reconstruct_totals(&ComparisonMatrix::from_cells(vec![c, zero]).unwrap()).unwrap();
        assert!((m.cells()[0].total.unwrap() - 0.5931).abs() < 5e-4);
        assert_eq!(m.cells()[1].total, Some(0.0));

        let mut partial = EvalCell::new("m", "a", "t");
        partial.sigma_c = Some(0.1);
        partial.mu_s = Some(0.1);
        let err = reconstruct_totals(&ComparisonMatrix::from_cells(vec![partial]).unwrap()).unwrap_err();
        assert!(matches!(err, Error::MissingComponent { component: "conl", .. }));
        assert!(err.to_string().contains("(m, a, t)"));
    }

    #[test]
    fn discrepancies() {
        let a = group(&[("x", 0.5), ("y", 0.6)]);
        let b = group(&[("x", 0.5004), ("y", 0.61)]);
        let d = total_discrepancies(&a, &b, 5e-4);
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].0.training_set, "y");
    }
}
