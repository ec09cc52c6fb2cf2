//! Chart families built from a [`ClassSweep`], and the reference lines each
//! chart carries.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::sweep::{smoothed_rates, ClassSweep};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ChartKind {
    /// TP against FP, raw counts.
    Pn,
    /// TP - FP against FP.
    DeltaPn,
    /// tpr against fpr.
    Roc,
    /// tpr - fpr against fpr.
    Boc,
    /// Recall against precision.
    Pr,
    /// 1/recall against 1/precision.
    PrReciprocal,
    /// -log recall against -log precision.
    PrLog,
    /// tpr against bias PP/N.
    Lift,
    /// tpr - fpr against bias PP/N.
    Bift,
    /// tpr - fpr against smoothed relative drift.
    Bprd,
    /// log stpr - log sfpr against log smoothed relative drift.
    Bird,
}

impl ChartKind {
    pub const ALL: [ChartKind; 11] = [
        ChartKind::Pn,
        ChartKind::DeltaPn,
        ChartKind::Roc,
        ChartKind::Boc,
        ChartKind::Pr,
        ChartKind::PrReciprocal,
        ChartKind::PrLog,
        ChartKind::Lift,
        ChartKind::Bift,
        ChartKind::Bprd,
        ChartKind::Bird,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ChartKind::Pn => "PN",
            ChartKind::DeltaPn => "DELTA_PN",
            ChartKind::Roc => "ROC",
            ChartKind::Boc => "BOC",
            ChartKind::Pr => "PR",
            ChartKind::PrReciprocal => "PR_RECIPROCAL",
            ChartKind::PrLog => "PR_LOG",
            ChartKind::Lift => "LIFT",
            ChartKind::Bift => "BIFT",
            ChartKind::Bprd => "BPRD",
            ChartKind::Bird => "BIRD",
        }
    }

    /// Lower-case name used for output files.
    pub fn file_stem(self) -> String {
        self.name().to_ascii_lowercase()
    }

    /// Precision-recall family: the `PP = 0` point is dropped and x is not
    /// monotone.
    pub fn is_precision_recall(self) -> bool {
        matches!(
            self,
            ChartKind::Pr | ChartKind::PrReciprocal | ChartKind::PrLog
        )
    }

    pub fn needs_smoothing(self) -> bool {
        matches!(self, ChartKind::Bprd | ChartKind::Bird)
    }

    pub fn axis_labels(self) -> (&'static str, &'static str) {
        match self {
            ChartKind::Pn => ("FP", "TP"),
            ChartKind::DeltaPn => ("FP", "TP - FP"),
            ChartKind::Roc => ("fpr", "tpr"),
            ChartKind::Boc => ("fpr", "tpr - fpr"),
            ChartKind::Pr => ("precision", "recall"),
            ChartKind::PrReciprocal => ("1 / precision", "1 / recall"),
            ChartKind::PrLog => ("-lg precision", "-lg recall"),
            ChartKind::Lift => ("bias PP/N", "tpr"),
            ChartKind::Bift => ("bias PP/N", "tpr - fpr"),
            ChartKind::Bprd => ("relative drift sRD", "tpr - fpr"),
            ChartKind::Bird => ("lg sRD", "lg stpr - lg sfpr"),
        }
    }
}

impl fmt::Display for ChartKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ChartKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let wanted = s.trim().to_ascii_uppercase().replace('-', "_");
        ChartKind::ALL
            .into_iter()
            .find(|k| k.name() == wanted)
            .ok_or_else(|| Error::Config(format!("unknown chart kind {s:?}")))
    }
}

/// Logarithm used on the PR_LOG and BIRD axes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LogBase {
    #[default]
    Two,
    Natural,
}

impl LogBase {
    pub fn log(self, v: f64) -> f64 {
        match self {
            LogBase::Two => v.log2(),
            LogBase::Natural => v.ln(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvePoint {
    pub x: f64,
    pub y: f64,
    pub theta: f64,
}

/// One class's points on one chart, ordered by decreasing threshold.
#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    pub kind: ChartKind,
    pub class_index: usize,
    pub points: Vec<CurvePoint>,
    pub rp: u64,
    pub rn: u64,
    pub smoothing: f64,
}

impl Curve {
    pub fn total(&self) -> u64 {
        self.rp + self.rn
    }
}

/// Projects every sweep point onto the axes of `kind` with base-2 logs.
pub fn build_curve(sweep: &ClassSweep, kind: ChartKind, s: f64) -> Result<Curve> {
    build_curve_in_base(sweep, kind, s, LogBase::Two)
}

pub fn build_curve_in_base(
    sweep: &ClassSweep,
    kind: ChartKind,
    s: f64,
    base: LogBase,
) -> Result<Curve> {
    if !s.is_finite() || s < 0.0 {
        return Err(Error::domain(format!(
            "smoothing must be finite and >= 0, got {s}"
        )));
    }
    if kind.needs_smoothing() && s <= 0.0 {
        return Err(Error::domain(format!(
            "{kind} needs smoothing s > 0, got {s}"
        )));
    }
    let (rp, rn) = (sweep.rp(), sweep.rn());
    let n = sweep.total() as f64;
    let mut points = Vec::with_capacity(sweep.len());
    for (i, p) in sweep.points().iter().enumerate() {
        if kind.is_precision_recall() && p.pp() == 0 {
            continue;
        }
        let tpr = sweep.tpr(i);
        let fpr = sweep.fpr(i);
        let precision = p.tp as f64 / p.pp() as f64;
        let (x, y) = match kind {
            ChartKind::Pn => (p.fp as f64, p.tp as f64),
            ChartKind::DeltaPn => (p.fp as f64, p.tp as f64 - p.fp as f64),
            ChartKind::Roc => (fpr, tpr),
            ChartKind::Boc => (fpr, tpr - fpr),
            ChartKind::Pr => (precision, tpr),
            ChartKind::PrReciprocal => (1.0 / precision, 1.0 / tpr),
            ChartKind::PrLog => (-base.log(precision), -base.log(tpr)),
            ChartKind::Lift => (p.pp() as f64 / n, tpr),
            ChartKind::Bift => (p.pp() as f64 / n, tpr - fpr),
            ChartKind::Bprd => (smoothed_rates(p, rp, rn, s)?.srd, tpr - fpr),
            ChartKind::Bird => {
                let r = smoothed_rates(p, rp, rn, s)?;
                (base.log(r.srd), base.log(r.stpr) - base.log(r.sfpr))
            }
        };
        points.push(CurvePoint {
            x,
            y,
            theta: p.theta,
        });
    }
    Ok(Curve {
        kind,
        class_index: sweep.class_index(),
        points,
        rp,
        rn,
        smoothing: s,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LineRole {
    Chance,
    BreakEven,
    Isobar,
    Meridian,
}

impl LineRole {
    pub fn name(self) -> &'static str {
        match self {
            LineRole::Chance => "chance",
            LineRole::BreakEven => "break-even",
            LineRole::Isobar => "isobar",
            LineRole::Meridian => "meridian",
        }
    }
}

/// Line shape in chart coordinates. Unbounded shapes are clipped to the
/// chart viewport when rendered.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum LineGeometry {
    Segment { from: (f64, f64), to: (f64, f64) },
    Vertical { x: f64 },
    Horizontal { y: f64 },
    Sloped { slope: f64, intercept: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReferenceLine {
    pub role: LineRole,
    pub geometry: LineGeometry,
    /// Isobar informedness, meridian drift in log units, or the x position
    /// of a vertical break-even line.
    pub level: f64,
    /// Set for lines that depend on one class's prevalence.
    pub class_index: Option<usize>,
}

impl ReferenceLine {
    fn shared(role: LineRole, geometry: LineGeometry, level: f64) -> Self {
        ReferenceLine {
            role,
            geometry,
            level,
            class_index: None,
        }
    }

    fn for_class(role: LineRole, geometry: LineGeometry, level: f64, class: usize) -> Self {
        ReferenceLine {
            role,
            geometry,
            level,
            class_index: Some(class),
        }
    }
}

/// Clips `y = x + offset` to the unit square.
fn unit_square_diagonal(offset: f64) -> Option<LineGeometry> {
    let x0 = (-offset).max(0.0);
    let x1 = (1.0 - offset).min(1.0);
    (x1 > x0).then_some(LineGeometry::Segment {
        from: (x0, x0 + offset),
        to: (x1, x1 + offset),
    })
}

/// Reference lines of one class's chart: chance lines, break-even lines,
/// informedness isobars and BIRD meridians. `s` is only used to find the
/// BIRD data range.
pub fn reference_lines(
    kind: ChartKind,
    sweep: &ClassSweep,
    isobar_levels: &[f64],
    s: f64,
) -> Vec<ReferenceLine> {
    use LineGeometry::*;
    use LineRole::*;

    let class = sweep.class_index();
    let rp = sweep.rp() as f64;
    let rn = sweep.rn() as f64;
    let n = rp + rn;
    let mut lines = Vec::new();
    match kind {
        ChartKind::Roc => {
            lines.push(ReferenceLine::shared(
                Chance,
                Segment {
                    from: (0.0, 0.0),
                    to: (1.0, 1.0),
                },
                0.0,
            ));
            for &level in isobar_levels {
                if let Some(g) = unit_square_diagonal(level) {
                    lines.push(ReferenceLine::shared(Isobar, g, level));
                }
            }
        }
        ChartKind::Boc => {
            lines.push(ReferenceLine::shared(Chance, Horizontal { y: 0.0 }, 0.0));
            for &level in isobar_levels {
                lines.push(ReferenceLine::shared(
                    Isobar,
                    Horizontal { y: level },
                    level,
                ));
            }
        }
        ChartKind::Pn | ChartKind::DeltaPn => {
            // Equal-informedness lines TP = (RP/RN) FP + level RP in count space.
            let slope = rp / rn;
            let shift = if kind == ChartKind::DeltaPn { 1.0 } else { 0.0 };
            let chance = Sloped {
                slope: slope - shift,
                intercept: 0.0,
            };
            lines.push(ReferenceLine::for_class(Chance, chance, 0.0, class));
            for &level in isobar_levels {
                let g = Sloped {
                    slope: slope - shift,
                    intercept: level * rp,
                };
                lines.push(ReferenceLine::for_class(Isobar, g, level, class));
            }
            // Break-even PP = RP.
            let (from, to) = if kind == ChartKind::Pn {
                ((rp, 0.0), (0.0, rp))
            } else {
                ((rp, -rp), (0.0, rp))
            };
            lines.push(ReferenceLine::for_class(
                BreakEven,
                Segment { from, to },
                rp,
                class,
            ));
        }
        ChartKind::Pr | ChartKind::PrReciprocal | ChartKind::PrLog => {
            lines.push(ReferenceLine::shared(
                BreakEven,
                Sloped {
                    slope: 1.0,
                    intercept: 0.0,
                },
                0.0,
            ));
        }
        ChartKind::Lift | ChartKind::Bift => {
            if kind == ChartKind::Lift {
                lines.push(ReferenceLine::shared(
                    Chance,
                    Segment {
                        from: (0.0, 0.0),
                        to: (1.0, 1.0),
                    },
                    0.0,
                ));
            } else {
                lines.push(ReferenceLine::shared(Chance, Horizontal { y: 0.0 }, 0.0));
            }
            let x = rp / n;
            lines.push(ReferenceLine::for_class(
                BreakEven,
                Vertical { x },
                x,
                class,
            ));
        }
        ChartKind::Bprd => {
            lines.push(ReferenceLine::shared(Chance, Horizontal { y: 0.0 }, 0.0));
            lines.push(ReferenceLine::shared(BreakEven, Vertical { x: 1.0 }, 1.0));
        }
        ChartKind::Bird => {
            lines.push(ReferenceLine::shared(Chance, Horizontal { y: 0.0 }, 0.0));
            let (lo, hi) = if s > 0.0 {
                (
                    (s / (rp + s)).log2().floor(),
                    ((n + s) / (rp + s)).log2().ceil(),
                )
            } else {
                (0.0, (n / rp).log2().ceil())
            };
            let lo = lo.min(0.0) as i64;
            let hi = hi.max(0.0) as i64;
            for m in lo..=hi {
                let role = if m == 0 { BreakEven } else { Meridian };
                lines.push(ReferenceLine::shared(
                    role,
                    Vertical { x: m as f64 },
                    m as f64,
                ));
            }
        }
    }
    lines
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perfect() -> ClassSweep {
        ClassSweep::from_scores(0, &[0.9, 0.1], &[true, false]).unwrap()
    }

    fn xy(c: &Curve) -> Vec<(f64, f64)> {
        c.points.iter().map(|p| (p.x, p.y)).collect()
    }

    #[test]
    fn roc_and_boc_of_perfect_sweep() {
        let s = perfect();
        assert_eq!(
            xy(&build_curve(&s, ChartKind::Roc, 1.0).unwrap()),
            vec![(0.0, 0.0), (0.0, 1.0), (1.0, 1.0)]
        );
        assert_eq!(
            xy(&build_curve(&s, ChartKind::Boc, 1.0).unwrap()),
            vec![(0.0, 0.0), (0.0, 1.0), (1.0, 0.0)]
        );
    }

    #[test]
    fn bift_uses_bias_axis() {
        let c = build_curve(&perfect(), ChartKind::Bift, 1.0).unwrap();
        assert_eq!(xy(&c), vec![(0.0, 0.0), (0.5, 1.0), (1.0, 0.0)]);
    }

    #[test]
    fn bird_point() {
        // 10 positives, 90 negatives; the 5 top scores are positives.
        let mut scores = Vec::new();
        let mut positive = Vec::new();
        for i in 0..100 {
            scores.push(if i < 5 { 2.0 } else { 1.0 - i as f64 / 1000.0 });
            positive.push(i < 10);
        }
        let sweep = ClassSweep::from_scores(0, &scores, &positive).unwrap();
        let c = build_curve(&sweep, ChartKind::Bird, 1.0).unwrap();
        let p = c.points[1];
        assert_eq!(sweep.points()[1].tp, 5);
        assert_eq!(sweep.points()[1].fp, 0);
        assert!((p.x - (6.0f64 / 11.0).log2()).abs() < 1e-12);
        assert!((p.y - (546.0f64 / 11.0).log2()).abs() < 1e-12);
        assert!((p.x - -0.874_469_117_916_141_2).abs() < 1e-12);
        assert!((p.y - 5.633_325_522_282_555).abs() < 1e-12);
    }

    #[test]
    fn bird_requires_smoothing() {
        assert!(build_curve(&perfect(), ChartKind::Bird, 0.0).is_err());
        assert!(build_curve(&perfect(), ChartKind::Bprd, 0.0).is_err());
        assert!(build_curve(&perfect(), ChartKind::Roc, 0.0).is_ok());
        assert!(build_curve(&perfect(), ChartKind::Roc, -1.0).is_err());
    }

    #[test]
    fn pr_drops_empty_prediction_point() {
        let s = perfect();
        let c = build_curve(&s, ChartKind::Pr, 1.0).unwrap();
        assert_eq!(c.points.len(), s.len() - 1);
        assert_eq!(xy(&c), vec![(1.0, 1.0), (0.5, 1.0)]);
        let log = build_curve(&s, ChartKind::PrLog, 1.0).unwrap();
        for (a, b) in c.points.iter().zip(&log.points) {
            assert_eq!(b.x, -a.x.log2());
            assert_eq!(b.y, -a.y.log2());
        }
    }

    #[test]
    fn natural_log_option() {
        let s = perfect();
        let two = build_curve(&s, ChartKind::Bird, 1.0).unwrap();
        let e = build_curve_in_base(&s, ChartKind::Bird, 1.0, LogBase::Natural).unwrap();
        for (a, b) in two.points.iter().zip(&e.points) {
            assert!((a.x * std::f64::consts::LN_2 - b.x).abs() < 1e-12);
        }
    }

    #[test]
    fn kind_names_round_trip() {
        for k in ChartKind::ALL {
            assert_eq!(k.name().parse::<ChartKind>().unwrap(), k);
            assert_eq!(k.file_stem().parse::<ChartKind>().unwrap(), k);
        }
        assert_eq!("delta-pn".parse::<ChartKind>().unwrap(), ChartKind::DeltaPn);
        assert!("HROC".parse::<ChartKind>().is_err());
    }

    #[test]
    fn roc_reference_lines() {
        let lines = reference_lines(ChartKind::Roc, &perfect(), &[0.5], 1.0);
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[0].role, LineRole::Chance);
        assert_eq!(
            lines[0].geometry,
            LineGeometry::Segment {
                from: (0.0, 0.0),
                to: (1.0, 1.0)
            }
        );
        assert_eq!(
            lines[1].geometry,
            LineGeometry::Segment {
                from: (0.0, 0.5),
                to: (0.5, 1.0)
            }
        );
        assert!(reference_lines(ChartKind::Roc, &perfect(), &[1.5], 1.0).len() == 1);
    }

    #[test]
    fn lift_break_even_at_prevalence() {
        let positive: Vec<bool> = (0..60).map(|i| i < 10).collect();
        let scores: Vec<f64> = (0..60).map(|i| i as f64).collect();
        let sweep = ClassSweep::from_scores(0, &scores, &positive).unwrap();
        let lines = reference_lines(ChartKind::Lift, &sweep, &[], 1.0);
        let be: Vec<_> = lines
            .iter()
            .filter(|l| l.role == LineRole::BreakEven)
            .collect();
        assert_eq!(be.len(), 1);
        assert_eq!(be[0].geometry, LineGeometry::Vertical { x: 1.0 / 6.0 });
    }

    #[test]
    fn chance_lines_on_corrected_charts() {
        for kind in [ChartKind::Boc, ChartKind::Bift, ChartKind::Bprd] {
            let lines = reference_lines(kind, &perfect(), &[], 1.0);
            assert!(lines
                .iter()
                .any(|l| l.role == LineRole::Chance
                    && l.geometry == LineGeometry::Horizontal { y: 0.0 }));
        }
        let bprd = reference_lines(ChartKind::Bprd, &perfect(), &[], 1.0);
        assert!(bprd
            .iter()
            .any(|l| l.geometry == LineGeometry::Vertical { x: 1.0 }));
    }

    #[test]
    fn bird_meridians_cover_range() {
        // RP = 10, RN = 50, s = 1: x from lg(1/11) ~ -3.46 to lg(61/11) ~ 2.47
        let positive: Vec<bool> = (0..60).map(|i| i < 10).collect();
        let scores: Vec<f64> = (0..60).map(|i| i as f64).collect();
        let sweep = ClassSweep::from_scores(0, &scores, &positive).unwrap();
        let lines = reference_lines(ChartKind::Bird, &sweep, &[], 1.0);
        let xs: Vec<f64> = lines
            .iter()
            .filter_map(|l| match l.geometry {
                LineGeometry::Vertical { x } => Some(x),
                _ => None,
            })
            .collect();
        assert_eq!(xs, vec![-4.0, -3.0, -2.0, -1.0, 0.0, 1.0, 2.0, 3.0]);
        let zero = lines
            .iter()
            .find(|l| l.geometry == LineGeometry::Vertical { x: 0.0 })
            .unwrap();
        assert_eq!(zero.role, LineRole::BreakEven);
    }
}
