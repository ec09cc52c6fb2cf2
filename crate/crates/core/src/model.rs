//! Contingency data: raw scores, hard-decision tables and their
//! probability form.

use std::collections::HashSet;

use crate::error::{Error, Result};

/// Tolerance for the "cells sum to one" invariant.
pub const PROBABILITY_TOLERANCE: f64 = 1e-12;

/// `N` instances, each with a true class and one score per class.
///
/// Higher scores mean more confidence in that class. Scores are stored
/// row-major, `scores[i * K + c]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    class_names: Vec<String>,
    labels: Vec<usize>,
    scores: Vec<f64>,
}

impl Dataset {
    /// Builds a dataset from one score row per instance.
    pub fn new(class_names: Vec<String>, labels: Vec<usize>, rows: Vec<Vec<f64>>) -> Result<Self> {
        let k = class_names.len();
        if let Some(i) = rows.iter().position(|r| r.len() != k) {
            return Err(Error::domain(format!(
                "score row {i} has {} entries, expected {k}",
                rows[i].len()
            )));
        }
        Self::from_flat(class_names, labels, rows.into_iter().flatten().collect())
    }

    /// Builds a dataset from a row-major `N x K` score buffer.
    pub fn from_flat(
        class_names: Vec<String>,
        labels: Vec<usize>,
        scores: Vec<f64>,
    ) -> Result<Self> {
        let k = class_names.len();
        if k < 2 {
            return Err(Error::domain(format!("need at least 2 classes, got {k}")));
        }
        if labels.is_empty() {
            return Err(Error::domain("dataset has no instances"));
        }
        let mut seen = HashSet::new();
        for name in &class_names {
            if name.is_empty() {
                return Err(Error::domain("class names must be non-empty"));
            }
            if !seen.insert(name.as_str()) {
                return Err(Error::domain(format!("duplicate class name {name:?}")));
            }
        }
        if scores.len() != labels.len() * k {
            return Err(Error::domain(format!(
                "score matrix has {} entries, expected {} x {k}",
                scores.len(),
                labels.len()
            )));
        }
        if let Some(i) = labels.iter().position(|&l| l >= k) {
            return Err(Error::domain(format!(
                "instance {i} has label {} but there are only {k} classes",
                labels[i]
            )));
        }
        if let Some(j) = scores.iter().position(|s| !s.is_finite()) {
            return Err(Error::domain(format!(
                "score of instance {} for class {} is not finite",
                j / k,
                j % k
            )));
        }
        Ok(Dataset {
            class_names,
            labels,
            scores,
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn num_classes(&self) -> usize {
        self.class_names.len()
    }

    pub fn class_names(&self) -> &[String] {
        &self.class_names
    }

    pub fn class_index(&self, name: &str) -> Option<usize> {
        self.class_names.iter().position(|n| n == name)
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    /// Scores of instance `i` for every class.
    pub fn row(&self, i: usize) -> &[f64] {
        let k = self.num_classes();
        &self.scores[i * k..(i + 1) * k]
    }

    pub fn score(&self, i: usize, c: usize) -> f64 {
        self.scores[i * self.num_classes() + c]
    }

    /// Score column `c`, in instance order.
    pub fn column(&self, c: usize) -> impl Iterator<Item = f64> + '_ {
        self.scores
            .iter()
            .skip(c)
            .step_by(self.num_classes())
            .copied()
    }

    /// Number of instances whose true class is `c`.
    pub fn class_count(&self, c: usize) -> u64 {
        self.labels.iter().filter(|&&l| l == c).count() as u64
    }

    /// Hard decisions: the highest-scoring class of each instance, lowest
    /// index on ties.
    pub fn argmax_predictions(&self) -> Vec<usize> {
        (0..self.len())
            .map(|i| {
                let row = self.row(i);
                let mut best = 0;
                for (c, &s) in row.iter().enumerate().skip(1) {
                    if s > row[best] {
                        best = c;
                    }
                }
                best
            })
            .collect()
    }

    /// Confusion table of the argmax decisions.
    pub fn confusion_table(&self) -> ConfusionTable {
        table_from_predictions(&self.labels, &self.argmax_predictions(), self.num_classes())
            .expect("dataset invariants guarantee a valid table")
    }
}

/// `K x K` hard-prediction counts; `count(r, p)` is the number of
/// instances of real class `r` predicted as `p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfusionTable {
    k: usize,
    counts: Vec<u64>,
}

/// Counts co-occurrences of true and predicted class indices.
pub fn table_from_predictions(
    labels: &[usize],
    predicted: &[usize],
    k: usize,
) -> Result<ConfusionTable> {
    if labels.len() != predicted.len() {
        return Err(Error::domain(format!(
            "{} labels but {} predictions",
            labels.len(),
            predicted.len()
        )));
    }
    if labels.is_empty() {
        return Err(Error::domain("no instances"));
    }
    let mut counts = vec![0u64; k * k];
    for (i, (&r, &p)) in labels.iter().zip(predicted).enumerate() {
        if r >= k || p >= k {
            return Err(Error::domain(format!(
                "instance {i}: class index out of range for K = {k}"
            )));
        }
        counts[r * k + p] += 1;
    }
    Ok(ConfusionTable { k, counts })
}

impl ConfusionTable {
    /// Builds a table from explicit rows. An all-zero table is allowed here;
    /// operations that need `N >= 1` reject it.
    pub fn from_counts(rows: Vec<Vec<u64>>) -> Result<Self> {
        let k = rows.len();
        if k == 0 {
            return Err(Error::domain("table has no classes"));
        }
        if rows.iter().any(|r| r.len() != k) {
            return Err(Error::domain("confusion table must be square"));
        }
        Ok(ConfusionTable {
            k,
            counts: rows.into_iter().flatten().collect(),
        })
    }

    pub fn num_classes(&self) -> usize {
        self.k
    }

    pub fn count(&self, real: usize, predicted: usize) -> u64 {
        self.counts[real * self.k + predicted]
    }

    /// Row sum `RP_c`.
    pub fn real_positives(&self, c: usize) -> u64 {
        (0..self.k).map(|p| self.count(c, p)).sum()
    }

    /// Column sum `PP_c`.
    pub fn predicted_positives(&self, c: usize) -> u64 {
        (0..self.k).map(|r| self.count(r, c)).sum()
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn trace(&self) -> u64 {
        (0..self.k).map(|c| self.count(c, c)).sum()
    }

    pub fn rows(&self) -> Vec<Vec<u64>> {
        self.counts.chunks(self.k).map(<[u64]>::to_vec).collect()
    }

    /// One-vs-rest projection of class `c` in probability form.
    pub fn dichotomize(&self, c: usize) -> Result<DichotomousStats> {
        if c >= self.k {
            return Err(Error::domain(format!(
                "class {c} out of range for K = {}",
                self.k
            )));
        }
        let n = self.total();
        if n == 0 {
            return Err(Error::domain("empty confusion table"));
        }
        let tp = self.count(c, c);
        let fp = self.predicted_positives(c) - tp;
        let fn_ = self.real_positives(c) - tp;
        let tn = n - tp - fp - fn_;
        DichotomousStats::from_counts(tp, fp, fn_, tn)
    }

    /// Every cell divided by `N`.
    pub fn normalize(&self) -> Result<Vec<Vec<f64>>> {
        let n = self.total();
        if n == 0 {
            return Err(Error::domain("cannot normalize an empty table"));
        }
        let n = n as f64;
        Ok(self
            .counts
            .chunks(self.k)
            .map(|row| row.iter().map(|&v| v as f64 / n).collect())
            .collect())
    }
}

/// The four cells of a dichotomous contingency table as probabilities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DichotomousStats {
    tp: f64,
    fp: f64,
    fn_: f64,
    tn: f64,
}

impl DichotomousStats {
    pub fn new(tp: f64, fp: f64, fn_: f64, tn: f64) -> Result<Self> {
        let cells = [tp, fp, fn_, tn];
        if cells.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::domain(format!(
                "cells must be finite and non-negative, got {cells:?}"
            )));
        }
        let sum: f64 = cells.iter().sum();
        if (sum - 1.0).abs() > PROBABILITY_TOLERANCE {
            return Err(Error::domain(format!("cells sum to {sum}, not 1")));
        }
        Ok(DichotomousStats { tp, fp, fn_, tn })
    }

    /// Probability form of integer counts.
    pub fn from_counts(tp: u64, fp: u64, fn_: u64, tn: u64) -> Result<Self> {
        let n = tp + fp + fn_ + tn;
        if n == 0 {
            return Err(Error::domain("all counts are zero"));
        }
        let n = n as f64;
        Ok(DichotomousStats {
            tp: tp as f64 / n,
            fp: fp as f64 / n,
            fn_: fn_ as f64 / n,
            tn: tn as f64 / n,
        })
    }

    pub fn tp(&self) -> f64 {
        self.tp
    }

    pub fn fp(&self) -> f64 {
        self.fp
    }

    pub fn fn_(&self) -> f64 {
        self.fn_
    }

    pub fn tn(&self) -> f64 {
        self.tn
    }

    /// Real positives, i.e. prevalence.
    pub fn rp(&self) -> f64 {
        self.tp + self.fn_
    }

    pub fn rn(&self) -> f64 {
        self.fp + self.tn
    }

    /// Predicted positives, i.e. bias.
    pub fn pp(&self) -> f64 {
        self.tp + self.fp
    }

    pub fn pn(&self) -> f64 {
        self.fn_ + self.tn
    }

    pub fn prevalence(&self) -> f64 {
        self.rp()
    }

    pub fn bias(&self) -> f64 {
        self.pp()
    }

    /// `tp*tn - fp*fn`, the determinant of the table.
    pub fn determinant(&self) -> f64 {
        self.tp * self.tn - self.fp * self.fn_
    }
}
