//! Dichotomous and multiclass evaluation measures.
//!
//! Measures that can be undefined on a valid table (precision with no
//! positive predictions, markedness, correlation) are returned as
//! `Option<f64>`; `None` is never conflated with a chance-level `0`.

use std::cmp::Ordering;
use std::ops::{Div, Sub};

use num_traits::One;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{ConfusionTable, DichotomousStats};

fn require_non_degenerate(stats: &DichotomousStats) -> Result<()> {
    if stats.rp() > 0.0 && stats.rn() > 0.0 {
        Ok(())
    } else {
        Err(Error::DegenerateStats {
            prevalence: stats.rp(),
        })
    }
}

fn ratio(num: f64, den: f64) -> Option<f64> {
    (den > 0.0).then(|| num / den)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BasicRates {
    pub recall: f64,
    pub inv_recall: f64,
    pub precision: Option<f64>,
    pub inv_precision: Option<f64>,
    pub fallout: f64,
    pub accuracy: f64,
}

/// Recall, inverse recall, precision, inverse precision, fallout and
/// accuracy.
pub fn basic_rates(stats: &DichotomousStats) -> Result<BasicRates> {
    require_non_degenerate(stats)?;
    Ok(BasicRates {
        recall: stats.tp() / stats.rp(),
        inv_recall: stats.tn() / stats.rn(),
        precision: ratio(stats.tp(), stats.pp()),
        inv_precision: ratio(stats.tn(), stats.pn()),
        fallout: stats.fp() / stats.rn(),
        accuracy: stats.tp() + stats.tn(),
    })
}

/// F1 as `tp / am(rp, pp)`; `0` when there are no true positives.
pub fn f_measure(stats: &DichotomousStats) -> Result<f64> {
    if stats.rp() <= 0.0 {
        return Err(Error::domain("F-measure needs at least one real positive"));
    }
    if stats.tp() == 0.0 {
        return Ok(0.0);
    }
    Ok(2.0 * stats.tp() / (stats.rp() + stats.pp()))
}

/// Bookmaker informedness `tpr - fpr`.
pub fn informedness(stats: &DichotomousStats) -> Result<f64> {
    require_non_degenerate(stats)?;
    Ok(stats.tp() / stats.rp() - stats.fp() / stats.rn())
}

/// `precision + inverse precision - 1`; undefined without both positive
/// and negative predictions.
pub fn markedness(stats: &DichotomousStats) -> Option<f64> {
    let precision = ratio(stats.tp(), stats.pp())?;
    let inv_precision = ratio(stats.tn(), stats.pn())?;
    Some(precision + inv_precision - 1.0)
}

/// Matthews correlation, the determinant over the geometric mean of all
/// four margins.
pub fn matthews_correlation(stats: &DichotomousStats) -> Option<f64> {
    let margins = stats.rp() * stats.rn() * stats.pp() * stats.pn();
    (margins > 0.0).then(|| stats.determinant() / margins.sqrt())
}

/// Signed geometric mean of informedness and markedness. `None` when they
/// disagree in sign.
pub fn signed_geometric_mean(b: f64, m: f64) -> Option<f64> {
    let product = b * m;
    if product < 0.0 {
        return None;
    }
    let magnitude = product.sqrt();
    Some(if b < 0.0 || m < 0.0 {
        -magnitude
    } else {
        magnitude
    })
}

/// Chance-corrected agreement `(acc - exp_acc) / (1 - exp_acc)`.
///
/// Generic so that it can be evaluated in exact rational arithmetic as well
/// as in `f64`.
pub fn kappa_general<T>(acc: T, exp_acc: T) -> Result<T>
where
    T: Copy + One + PartialOrd + Sub<Output = T> + Div<Output = T>,
{
    if exp_acc.partial_cmp(&T::one()) != Some(Ordering::Less) {
        return Err(Error::domain("expected accuracy must be below 1"));
    }
    Ok((acc - exp_acc) / (T::one() - exp_acc))
}

fn observed_agreement(table: &ConfusionTable) -> Result<f64> {
    let n = table.total();
    if n == 0 {
        return Err(Error::domain("empty confusion table"));
    }
    Ok(table.trace() as f64 / n as f64)
}

/// Cohen's kappa with chance agreement `sum_c prev_c * bias_c`.
pub fn cohen_kappa(table: &ConfusionTable) -> Result<f64> {
    let po = observed_agreement(table)?;
    let n = table.total() as f64;
    let pe: f64 = (0..table.num_classes())
        .map(|c| (table.real_positives(c) as f64 / n) * (table.predicted_positives(c) as f64 / n))
        .sum();
    kappa_general(po, pe)
}

/// Fleiss' kappa with chance agreement `sum_c ((RP_c + PP_c) / 2N)^2`.
pub fn fleiss_kappa(table: &ConfusionTable) -> Result<f64> {
    let po = observed_agreement(table)?;
    let n2 = 2.0 * table.total() as f64;
    let pe: f64 = (0..table.num_classes())
        .map(|c| {
            let mean = (table.real_positives(c) + table.predicted_positives(c)) as f64 / n2;
            mean * mean
        })
        .sum();
    kappa_general(po, pe)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MulticlassAggregates {
    pub accuracy: f64,
    pub bookmaker_informedness: f64,
    pub markedness: Option<f64>,
    pub correlation: Option<f64>,
}

/// Bias-weighted informedness, prevalence-weighted markedness and their
/// signed geometric mean over all classes of a table.
///
/// Markedness (and therefore correlation) is `None` when any class was
/// never predicted, or predicted for every instance.
pub fn multiclass_aggregates(table: &ConfusionTable) -> Result<MulticlassAggregates> {
    let n = table.total();
    if n == 0 {
        return Err(Error::domain("empty confusion table"));
    }
    let mut bookmaker = 0.0;
    let mut marked = Some(0.0);
    for c in 0..table.num_classes() {
        let rp = table.real_positives(c);
        if rp == 0 || rp == n {
            return Err(Error::DegenerateClass {
                class: c,
                positives: rp,
                negatives: n - rp,
            });
        }
        let stats = table.dichotomize(c)?;
        bookmaker += stats.bias() * informedness(&stats)?;
        marked = match (marked, markedness(&stats)) {
            (Some(acc), Some(m)) => Some(acc + stats.prevalence() * m),
            _ => None,
        };
    }
    Ok(MulticlassAggregates {
        accuracy: table.trace() as f64 / n as f64,
        bookmaker_informedness: bookmaker,
        markedness: marked,
        correlation: marked.and_then(|m| signed_geometric_mean(bookmaker, m)),
    })
}

/// Every dichotomous measure of one table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DichotomousReport {
    pub recall: f64,
    pub inv_recall: f64,
    pub precision: Option<f64>,
    pub inv_precision: Option<f64>,
    pub fallout: f64,
    pub accuracy: f64,
    pub f1: f64,
    pub informedness: f64,
    pub markedness: Option<f64>,
    pub correlation: Option<f64>,
}

impl DichotomousReport {
    pub fn from_stats(stats: &DichotomousStats) -> Result<Self> {
        let basic = basic_rates(stats)?;
        Ok(DichotomousReport {
            recall: basic.recall,
            inv_recall: basic.inv_recall,
            precision: basic.precision,
            inv_precision: basic.inv_precision,
            fallout: basic.fallout,
            accuracy: basic.accuracy,
            f1: f_measure(stats)?,
            informedness: informedness(stats)?,
            markedness: markedness(stats),
            correlation: matthews_correlation(stats),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const EPS: f64 = 1e-12;

    fn stats(tp: f64, fp: f64, fn_: f64, tn: f64) -> DichotomousStats {
        DichotomousStats::new(tp, fp, fn_, tn).unwrap()
    }

    fn table(rows: &[&[u64]]) -> ConfusionTable {
        ConfusionTable::from_counts(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn basic_rates_symmetric_case() {
        let r = basic_rates(&stats(0.4, 0.1, 0.1, 0.4)).unwrap();
        assert!((r.recall - 0.8).abs() < EPS);
        assert!((r.precision.unwrap() - 0.8).abs() < EPS);
        assert!((r.fallout - 0.2).abs() < EPS);
        assert!((r.accuracy - 0.8).abs() < EPS);
    }

    #[test]
    fn basic_rates_perfect() {
        let r = basic_rates(&stats(0.3, 0.0, 0.0, 0.7)).unwrap();
        assert_eq!(
            (r.recall, r.precision, r.accuracy, r.fallout),
            (1.0, Some(1.0), 1.0, 0.0)
        );
    }

    #[test]
    fn no_positive_predictions() {
        let s = stats(0.0, 0.0, 0.3, 0.7);
        let r = basic_rates(&s).unwrap();
        assert_eq!(r.precision, None);
        assert_eq!(r.recall, 0.0);
        assert_eq!(markedness(&s), None);
        assert_eq!(matthews_correlation(&s), None);
        assert_eq!(f_measure(&s).unwrap(), 0.0);
    }

    #[test]
    fn degenerate_stats() {
        let s = stats(0.0, 0.5, 0.0, 0.5);
        assert!(matches!(
            basic_rates(&s),
            Err(Error::DegenerateStats { .. })
        ));
        assert!(informedness(&s).is_err());
        assert!(f_measure(&s).is_err());
    }

    #[test]
    fn f1_examples() {
        assert!((f_measure(&stats(0.4, 0.1, 0.1, 0.4)).unwrap() - 0.8).abs() < EPS);
        // rp = 0.5, pp = 0.4
        let f = f_measure(&stats(0.3, 0.1, 0.2, 0.4)).unwrap();
        assert!((f - 2.0 / 3.0).abs() < EPS);
        let (p, r) = (0.3 / 0.4, 0.3 / 0.5);
        assert!((f - 2.0 * p * r / (p + r)).abs() < EPS);
    }

    #[test]
    fn informedness_examples() {
        assert!((informedness(&stats(0.4, 0.1, 0.1, 0.4)).unwrap() - 0.6).abs() < EPS);
        assert_eq!(informedness(&stats(0.25, 0.25, 0.25, 0.25)).unwrap(), 0.0);
        // Always-wrong guesser on a four-option exam: recall 0, bias 0, prevalence 1/4.
        assert_eq!(informedness(&stats(0.0, 0.0, 0.25, 0.75)).unwrap(), 0.0);
    }

    #[test]
    fn markedness_examples() {
        assert!((markedness(&stats(0.4, 0.1, 0.1, 0.4)).unwrap() - 0.6).abs() < EPS);
        assert_eq!(markedness(&stats(0.25, 0.25, 0.25, 0.25)), Some(0.0));
        assert!((markedness(&stats(0.3, 0.2, 0.1, 0.4)).unwrap() - 0.4).abs() < EPS);
    }

    #[test]
    fn correlation_examples() {
        assert!((matthews_correlation(&stats(0.4, 0.1, 0.1, 0.4)).unwrap() - 0.6).abs() < EPS);
        assert_eq!(
            matthews_correlation(&stats(0.25, 0.25, 0.25, 0.25)),
            Some(0.0)
        );
        // B = 0.1/0.24, M = 0.1/0.25
        let s = stats(0.3, 0.2, 0.1, 0.4);
        let expected = (0.1f64 / 0.24 * (0.1 / 0.25)).sqrt();
        assert!((matthews_correlation(&s).unwrap() - expected).abs() < EPS);
        assert!((expected - 0.408_248_290_463_863).abs() < 1e-12);
    }

    #[test]
    fn signed_gm() {
        assert_eq!(signed_geometric_mean(-0.25, -0.25), Some(-0.25));
        assert_eq!(signed_geometric_mean(0.25, -0.25), None);
        assert_eq!(signed_geometric_mean(0.0, -0.25), Some(0.0));
    }

    #[test]
    fn kappa_general_examples() {
        let k = 4.0f64;
        assert!((kappa_general(1.0 - 1.0 / k, 1.0 / k).unwrap() - 2.0 / 3.0).abs() < EPS);
        assert_eq!(kappa_general(0.3, 0.3).unwrap(), 0.0);
        assert_eq!(kappa_general(1.0, 0.37).unwrap(), 1.0);
        assert!(kappa_general(0.5, 1.0).is_err());
    }

    #[test]
    fn cohen_examples() {
        assert_eq!(cohen_kappa(&table(&[&[3, 0], &[0, 2]])).unwrap(), 1.0);
        assert_eq!(cohen_kappa(&table(&[&[1, 1], &[1, 1]])).unwrap(), 0.0);
        assert!((cohen_kappa(&table(&[&[4, 1], &[2, 3]])).unwrap() - 0.4).abs() < EPS);
        assert!(cohen_kappa(&table(&[&[5, 0], &[0, 0]])).is_err());
    }

    #[test]
    fn fleiss_examples() {
        assert_eq!(fleiss_kappa(&table(&[&[3, 0], &[0, 2]])).unwrap(), 1.0);
        assert_eq!(fleiss_kappa(&table(&[&[1, 1], &[1, 1]])).unwrap(), 0.0);
        // mean margins 0.55 / 0.45 -> pe = 0.505
        let k = fleiss_kappa(&table(&[&[4, 1], &[2, 3]])).unwrap();
        assert!((k - (0.7 - 0.505) / 0.495).abs() < EPS);
    }

    #[test]
    fn multiclass_identity_and_uniform() {
        let a = multiclass_aggregates(&table(&[&[2, 0, 0], &[0, 3, 0], &[0, 0, 1]])).unwrap();
        assert_eq!(a.accuracy, 1.0);
        assert!((a.markedness.unwrap() - 1.0).abs() < EPS);
        assert!((a.correlation.unwrap() - 1.0).abs() < EPS);
        assert!((a.bookmaker_informedness - 1.0).abs() < EPS);
        let u = multiclass_aggregates(&table(&[&[1, 1, 1], &[1, 1, 1], &[1, 1, 1]])).unwrap();
        assert!((u.accuracy - 1.0 / 3.0).abs() < EPS);
        assert!(u.bookmaker_informedness.abs() < EPS);
        assert!(u.markedness.unwrap().abs() < EPS);
    }

    #[test]
    fn multiclass_two_class_reduces_to_informedness() {
        let t = table(&[&[4, 1], &[2, 3]]);
        let a = multiclass_aggregates(&t).unwrap();
        assert!((a.accuracy - 0.7).abs() < EPS);
        assert!((a.bookmaker_informedness - 0.4).abs() < EPS);
        for c in 0..2 {
            let b = informedness(&t.dichotomize(c).unwrap()).unwrap();
            assert!((a.bookmaker_informedness - b).abs() < EPS);
        }
    }

    #[test]
    fn multiclass_errors_and_unpredicted_class() {
        let err = multiclass_aggregates(&table(&[&[2, 0, 0], &[0, 0, 0], &[0, 0, 1]])).unwrap_err();
        assert!(matches!(err, Error::DegenerateClass { class: 1, .. }));
        let a = multiclass_aggregates(&table(&[&[2, 0, 0], &[1, 0, 0], &[0, 0, 1]])).unwrap();
        assert_eq!(a.markedness, None);
        assert_eq!(a.correlation, None);
    }
}
