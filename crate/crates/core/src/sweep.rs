//! One-vs-rest threshold sweeps and Laplace-smoothed rates.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::model::{Dataset, DichotomousStats};

/// AddOne smoothing.
pub const DEFAULT_SMOOTHING: f64 = 1.0;

/// Counts of instances scoring strictly above `theta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    /// Threshold; the final point of every sweep uses `-inf`.
    pub theta: f64,
    pub tp: u64,
    pub fp: u64,
}

impl SweepPoint {
    pub fn pp(&self) -> u64 {
        self.tp + self.fp
    }
}

/// Monotone `(TP, FP)` staircase of one class against the rest.
///
/// Thresholds are the distinct scores in descending order followed by a
/// `-inf` sentinel, so the first point is `(0, 0)` and the last is
/// `(RP, RN)`. Tied scores move together in a single step.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassSweep {
    class_index: usize,
    rp: u64,
    rn: u64,
    points: Vec<SweepPoint>,
}

impl ClassSweep {
    /// Sweeps score column `c` of `dataset`.
    pub fn new(dataset: &Dataset, c: usize) -> Result<Self> {
        if c >= dataset.num_classes() {
            return Err(Error::domain(format!(
                "class {c} out of range for K = {}",
                dataset.num_classes()
            )));
        }
        let positive: Vec<bool> = dataset.labels().iter().map(|&l| l == c).collect();
        let scores: Vec<f64> = dataset.column(c).collect();
        Self::from_scores(c, &scores, &positive)
    }

    /// Sweeps raw scores with explicit positive/negative flags.
    pub fn from_scores(class_index: usize, scores: &[f64], positive: &[bool]) -> Result<Self> {
        if scores.len() != positive.len() {
            return Err(Error::domain(format!(
                "{} scores but {} labels",
                scores.len(),
                positive.len()
            )));
        }
        if scores.iter().any(|s| !s.is_finite()) {
            return Err(Error::domain("scores must be finite"));
        }
        let rp = positive.iter().filter(|&&p| p).count() as u64;
        let rn = positive.len() as u64 - rp;
        if rp == 0 || rn == 0 {
            return Err(Error::DegenerateClass {
                class: class_index,
                positives: rp,
                negatives: rn,
            });
        }

        let mut order: Vec<(f64, bool)> = scores
            .iter()
            .copied()
            .zip(positive.iter().copied())
            .collect();
        order.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap_or(Ordering::Equal));

        let mut points = Vec::with_capacity(order.len() + 1);
        points.push(SweepPoint {
            theta: order[0].0,
            tp: 0,
            fp: 0,
        });
        let (mut tp, mut fp) = (0, 0);
        let mut i = 0;
        while i < order.len() {
            let value = order[i].0;
            while i < order.len() && order[i].0 == value {
                if order[i].1 {
                    tp += 1;
                } else {
                    fp += 1;
                }
                i += 1;
            }
            let theta = order.get(i).map_or(f64::NEG_INFINITY, |next| next.0);
            points.push(SweepPoint { theta, tp, fp });
        }

        Ok(ClassSweep {
            class_index,
            rp,
            rn,
            points,
        })
    }

    pub fn class_index(&self) -> usize {
        self.class_index
    }

    /// Positives of this class, `RP`.
    pub fn rp(&self) -> u64 {
        self.rp
    }

    /// Negatives (all other classes), `RN`.
    pub fn rn(&self) -> u64 {
        self.rn
    }

    pub fn total(&self) -> u64 {
        self.rp + self.rn
    }

    pub fn points(&self) -> &[SweepPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn tpr(&self, i: usize) -> f64 {
        self.points[i].tp as f64 / self.rp as f64
    }

    pub fn fpr(&self, i: usize) -> f64 {
        self.points[i].fp as f64 / self.rn as f64
    }

    /// Probability-form contingency table at point `i`.
    pub fn stats_at(&self, i: usize) -> Result<DichotomousStats> {
        let p = self.points.get(i).ok_or_else(|| {
            Error::domain(format!(
                "point {i} out of range ({} points)",
                self.points.len()
            ))
        })?;
        DichotomousStats::from_counts(p.tp, p.fp, self.rp - p.tp, self.rn - p.fp)
    }

    pub fn smoothed_rates(&self, i: usize, s: f64) -> Result<SmoothedRates> {
        smoothed_rates(&self.points[i], self.rp, self.rn, s)
    }
}

/// Rates with `s` added to every count and to every margin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoothedRates {
    /// `(TP+s)/(RP+s)`
    pub stpr: f64,
    /// `(FP+s)/(RN+s)`
    pub sfpr: f64,
    /// Relative drift `(PP+s)/(RP+s)`.
    pub srd: f64,
    pub s: f64,
}

/// Smoothed rates of a sweep point. With `s = 0` these are the raw rates.
pub fn smoothed_rates(point: &SweepPoint, rp: u64, rn: u64, s: f64) -> Result<SmoothedRates> {
    if !(s.is_finite() && s >= 0.0) {
        return Err(Error::domain(format!(
            "smoothing must be finite and >= 0, got {s}"
        )));
    }
    if rp == 0 || rn == 0 {
        return Err(Error::domain(format!(
            "need RP >= 1 and RN >= 1, got {rp} and {rn}"
        )));
    }
    let smoothed_rp = rp as f64 + s;
    Ok(SmoothedRates {
        stpr: (point.tp as f64 + s) / smoothed_rp,
        sfpr: (point.fp as f64 + s) / (rn as f64 + s),
        srd: (point.pp() as f64 + s) / smoothed_rp,
        s,
    })
}
