//! The inertia-graded ordering on Weil-Deligne monodromy data:
//! componentwise dominance of the nilpotent operators on isotypic
//! multiplicity spaces.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::Mat;

use super::{gerstenhaber_leq, jordan_type, Partition};

/// Pre-decomposed isotypic data: label -> nilpotent operator on the
/// multiplicity space. Missing labels mean a zero multiplicity space.
#[derive(Clone, Debug)]
pub struct InertialWD<F: Field> {
    pub field: F,
    pub components: BTreeMap<String, Mat<F::Elem>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct WdComparison {
    pub less_or_equal: bool,
    pub equivalent: bool,
    /// Per-label verdicts, for the report.
    pub by_label: Vec<(String, bool, bool)>,
}

impl<F: Field> InertialWD<F> {
    pub fn new(field: F, components: BTreeMap<String, Mat<F::Elem>>) -> Result<Self> {
        for (label, m) in &components {
            jordan_type(&field, m).map_err(|_| {
                Error::Precondition(format!("component {label} is not nilpotent"))
            })?;
        }
        Ok(InertialWD { field, components })
    }

    pub fn types(&self) -> Vec<(String, Partition)> {
        self.components
            .iter()
            .map(|(l, m)| (l.clone(), jordan_type(&self.field, m).unwrap()))
            .collect()
    }
}

/// Componentwise dominance over matching labels. Shared labels must carry
/// multiplicity spaces of equal dimension.
pub fn wd_compare<F: Field>(a: &InertialWD<F>, b: &InertialWD<F>) -> Result<WdComparison> {
    let f = &a.field;
    let mut labels: Vec<String> = a.components.keys().cloned().collect();
    for l in b.components.keys() {
        if !labels.contains(l) {
            labels.push(l.clone());
        }
    }
    labels.sort();
    let mut leq = true;
    let mut equiv = true;
    let mut by_label = Vec::new();
    for l in &labels {
        let (le, eq) = match (a.components.get(l), b.components.get(l)) {
            (Some(ma), Some(mb)) => {
                if ma.rows != mb.rows {
                    return Err(Error::Shape(format!(
                        "label {l}: multiplicity spaces have dimensions {} and {}",
                        ma.rows, mb.rows
                    )));
                }
                let le = gerstenhaber_leq(f, ma, mb)?;
                let ta = jordan_type(f, ma)?;
                let tb = jordan_type(f, mb)?;
                (le, ta == tb)
            }
            (Some(ma), None) => {
                // zero space on the right: left must be zero-dimensional too
                if ma.rows != 0 {
                    return Err(Error::Shape(format!(
                        "label {l}: multiplicity spaces have dimensions {} and 0",
                        ma.rows
                    )));
                }
                (true, true)
            }
            (None, Some(mb)) => {
                if mb.rows != 0 {
                    return Err(Error::Shape(format!(
                        "label {l}: multiplicity spaces have dimensions 0 and {}",
                        mb.rows
                    )));
                }
                (true, true)
            }
            (None, None) => (true, true),
        };
        leq &= le;
        equiv &= eq;
        by_label.push((l.clone(), le, eq));
    }
    Ok(WdComparison {
        less_or_equal: leq,
        equivalent: equiv,
        by_label,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rationals;
    use crate::nilpotent::jordan_matrix;

    fn wd(pairs: Vec<(&str, Partition)>) -> InertialWD<Rationals> {
        let f = Rationals;
        let components = pairs
            .into_iter()
            .map(|(l, p)| (l.to_string(), jordan_matrix(&f, &p)))
            .collect();
        InertialWD::new(f, components).unwrap()
    }

    #[test]
    fn all_zero_components_are_equivalent() {
        let a = wd(vec![("triv", Partition(vec![1, 1]))]);
        let b = wd(vec![("triv", Partition(vec![1, 1]))]);
        let c = wd_compare(&a, &b).unwrap();
        assert!(c.less_or_equal && c.equivalent);
    }

    #[test]
    fn single_label_strict_comparison() {
        let a = wd(vec![("triv", Partition(vec![1, 1]))]);
        let b = wd(vec![("triv", Partition(vec![2]))]);
        let c = wd_compare(&a, &b).unwrap();
        assert!(c.less_or_equal && !c.equivalent);
        let r = wd_compare(&b, &a).unwrap();
        assert!(!r.less_or_equal);
    }

    #[test]
    fn opposite_labels_are_incomparable() {
        let a = wd(vec![
            ("u", Partition(vec![2])),
            ("v", Partition(vec![1, 1])),
        ]);
        let b = wd(vec![
            ("u", Partition(vec![1, 1])),
            ("v", Partition(vec![2])),
        ]);
        assert!(!wd_compare(&a, &b).unwrap().less_or_equal);
        assert!(!wd_compare(&b, &a).unwrap().less_or_equal);
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let a = wd(vec![("u", Partition(vec![2]))]);
        let b = wd(vec![("u", Partition(vec![1, 1, 1]))]);
        assert!(wd_compare(&a, &b).is_err());
    }
}
