//! Areas, the pair-ranking oracle, ROC convex hull and isocost operating
//! points.

use serde::Serialize;

use crate::curves::{build_curve, ChartKind, Curve};
use crate::error::{Error, Result};
use crate::model::Dataset;
use crate::sweep::ClassSweep;

/// Trapezoidal area under a polyline with non-decreasing x.
fn trapezoid(points: impl IntoIterator<Item = (f64, f64)>) -> f64 {
    let mut iter = points.into_iter();
    let Some(mut prev) = iter.next() else {
        return 0.0;
    };
    let mut area = 0.0;
    for p in iter {
        area += (p.0 - prev.0) * (p.1 + prev.1) / 2.0;
        prev = p;
    }
    area
}

/// Trapezoidal area under `curve`.
///
/// Precision-recall curves are rejected: their x axis is not monotone.
pub fn area_under(curve: &Curve) -> Result<f64> {
    if curve.kind.is_precision_recall() {
        return Err(Error::UnsupportedKind(curve.kind.name()));
    }
    if curve.points.windows(2).any(|w| w[1].x < w[0].x) {
        return Err(Error::domain(format!(
            "{} curve has decreasing x",
            curve.kind
        )));
    }
    Ok(trapezoid(curve.points.iter().map(|p| (p.x, p.y))))
}

/// Fraction of positive/negative pairs ranked correctly by score column
/// `c`, ties counted as one half. Brute force over all pairs.
pub fn rank_auc(dataset: &Dataset, c: usize) -> Result<f64> {
    if c >= dataset.num_classes() {
        return Err(Error::domain(format!("class {c} out of range")));
    }
    let (mut pos, mut neg) = (Vec::new(), Vec::new());
    for (score, &label) in dataset.column(c).zip(dataset.labels()) {
        if label == c {
            pos.push(score);
        } else {
            neg.push(score);
        }
    }
    if pos.is_empty() || neg.is_empty() {
        return Err(Error::DegenerateClass {
            class: c,
            positives: pos.len() as u64,
            negatives: neg.len() as u64,
        });
    }
    // Count in half-units so the sum stays an exact integer.
    let mut halves: u64 = 0;
    for &p in &pos {
        for &n in &neg {
            halves += match p.partial_cmp(&n) {
                Some(std::cmp::Ordering::Greater) => 2,
                Some(std::cmp::Ordering::Equal) => 1,
                _ => 0,
            };
        }
    }
    Ok(halves as f64 / (2 * pos.len() * neg.len()) as f64)
}

/// All six areas of one sweep. The dual curves plot `(fnr, tnr)` and
/// `(fnr, tnr - fnr)`, traversing the same staircase from the `-inf` end.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AreaIdentities {
    pub auroc: f64,
    pub auroc_dual: f64,
    pub auboc: f64,
    pub auboc_dual: f64,
    pub aubift: f64,
    pub gini: f64,
}

impl AreaIdentities {
    /// `N * AUBIFT - (RN * AUBOC + RP * AUBOC')`, which vanishes in exact
    /// arithmetic.
    pub fn bift_residual(&self, rp: u64, rn: u64) -> f64 {
        (rp + rn) as f64 * self.aubift - (rn as f64 * self.auboc + rp as f64 * self.auboc_dual)
    }
}

pub fn area_identities(sweep: &ClassSweep) -> Result<AreaIdentities> {
    let auroc = area_under(&build_curve(sweep, ChartKind::Roc, 0.0)?)?;
    let auboc = area_under(&build_curve(sweep, ChartKind::Boc, 0.0)?)?;
    let aubift = area_under(&build_curve(sweep, ChartKind::Bift, 0.0)?)?;

    let (rp, rn) = (sweep.rp() as f64, sweep.rn() as f64);
    let dual: Vec<(f64, f64)> = sweep
        .points()
        .iter()
        .rev()
        .map(|p| {
            (
                (sweep.rp() - p.tp) as f64 / rp,
                (sweep.rn() - p.fp) as f64 / rn,
            )
        })
        .collect();
    let auroc_dual = trapezoid(dual.iter().copied());
    let auboc_dual = trapezoid(dual.iter().map(|&(fnr, tnr)| (fnr, tnr - fnr)));

    Ok(AreaIdentities {
        auroc,
        auroc_dual,
        auboc,
        auboc_dual,
        aubift,
        gini: 2.0 * auroc - 1.0,
    })
}

/// A sweep point chosen as a deployment threshold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OperatingPoint {
    /// Position in the source sweep.
    pub index: usize,
    pub theta: f64,
    pub fpr: f64,
    pub tpr: f64,
    pub informedness: f64,
    /// Slope of the isocost family used to select the point.
    pub cost_skew: f64,
}

impl OperatingPoint {
    pub fn from_sweep(sweep: &ClassSweep, index: usize, cost_skew: f64) -> Self {
        let (fpr, tpr) = (sweep.fpr(index), sweep.tpr(index));
        OperatingPoint {
            index,
            theta: sweep.points()[index].theta,
            fpr,
            tpr,
            informedness: tpr - fpr,
            cost_skew,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HullSegment {
    pub start: OperatingPoint,
    pub end: OperatingPoint,
    /// `dtpr / dfpr`; `+inf` for a vertical first segment.
    pub gradient: f64,
}

/// Upper convex hull of the ROC points, from `(0, 0)` to `(1, 1)`.
/// Collinear interior points are not hull vertices.
pub fn roch_hull(sweep: &ClassSweep) -> Result<Vec<HullSegment>> {
    let mut order: Vec<usize> = (0..sweep.len()).collect();
    order.sort_by(|&a, &b| {
        (sweep.fpr(a), sweep.tpr(a))
            .partial_cmp(&(sweep.fpr(b), sweep.tpr(b)))
            .expect("rates are finite")
    });

    // Monotone chain in integer count space: cross products are exact.
    let (rp, rn) = (sweep.rp() as i128, sweep.rn() as i128);
    let at = |i: usize| {
        let p = sweep.points()[i];
        (p.fp as i128 * rp, p.tp as i128 * rn)
    };
    let mut hull: Vec<usize> = Vec::new();
    for &i in &order {
        while hull.len() >= 2 {
            let (o, a, b) = (at(hull[hull.len() - 2]), at(hull[hull.len() - 1]), at(i));
            let cross = (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0);
            if cross >= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(i);
    }

    Ok(hull
        .windows(2)
        .map(|w| {
            let start = OperatingPoint::from_sweep(sweep, w[0], 1.0);
            let end = OperatingPoint::from_sweep(sweep, w[1], 1.0);
            let dx = end.fpr - start.fpr;
            let gradient = if dx == 0.0 {
                f64::INFINITY
            } else {
                (end.tpr - start.tpr) / dx
            };
            HullSegment {
                start,
                end,
                gradient,
            }
        })
        .collect())
}

/// Hull height at `fpr`; the upper end of a vertical segment when `fpr`
/// sits on one.
pub fn hull_tpr_at(hull: &[HullSegment], fpr: f64) -> f64 {
    let mut best = f64::NEG_INFINITY;
    for seg in hull {
        if fpr < seg.start.fpr || fpr > seg.end.fpr {
            continue;
        }
        let y = if seg.end.fpr == seg.start.fpr {
            seg.end.tpr
        } else {
            let t = (fpr - seg.start.fpr) / (seg.end.fpr - seg.start.fpr);
            seg.start.tpr + t * (seg.end.tpr - seg.start.tpr)
        };
        best = best.max(y);
    }
    best
}

pub fn hull_area(hull: &[HullSegment]) -> f64 {
    hull.iter()
        .map(|s| (s.end.fpr - s.start.fpr) * (s.end.tpr + s.start.tpr) / 2.0)
        .sum()
}

/// The sweep point touching the highest isocost line `tpr - skew * fpr`.
/// Ties go to the lower fpr, then the higher threshold.
pub fn best_operating_point(sweep: &ClassSweep, cost_skew: f64) -> Result<OperatingPoint> {
    if !(cost_skew.is_finite() && cost_skew > 0.0) {
        return Err(Error::domain(format!(
            "cost skew must be finite and > 0, got {cost_skew}"
        )));
    }
    // Scaled by RP*RN: exact for integer skews.
    let (rp, rn) = (sweep.rp() as f64, sweep.rn() as f64);
    let score = |i: usize| {
        let p = sweep.points()[i];
        p.tp as f64 * rn - cost_skew * p.fp as f64 * rp
    };
    let mut best = 0;
    for i in 1..sweep.len() {
        let (s, b) = (score(i), score(best));
        // fpr is non-decreasing along the sweep, so an equal score never wins.
        if s > b {
            best = i;
        }
    }
    Ok(OperatingPoint::from_sweep(sweep, best, cost_skew))
}

/// Expected outcome of choosing system `b` with probability `lambda` and
/// system `a` otherwise. This is an expectation on the evaluation data, not
/// a guarantee on held-out data.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MixedPoint {
    pub fpr: f64,
    pub tpr: f64,
    pub mixing: f64,
}

pub fn interpolate_systems(
    a: &OperatingPoint,
    b: &OperatingPoint,
    lambda: f64,
) -> Result<MixedPoint> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::domain(format!(
            "mixing probability {lambda} outside [0, 1]"
        )));
    }
    Ok(MixedPoint {
        fpr: (1.0 - lambda) * a.fpr + lambda * b.fpr,
        tpr: (1.0 - lambda) * a.tpr + lambda * b.tpr,
        mixing: lambda,
    })
}
