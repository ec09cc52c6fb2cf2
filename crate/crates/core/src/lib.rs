//! Chance-corrected evaluation of scoring classifiers.
//!
//! The pipeline runs bottom-up:
//!
//! * [`model`] holds the raw [`Dataset`] and the contingency forms
//!   ([`ConfusionTable`], [`DichotomousStats`]).
//! * [`sweep`] turns one score column into a one-vs-rest staircase of
//!   `(TP, FP)` counts, one step per distinct score.
//! * [`metrics`] computes recall, precision, informedness, markedness,
//!   correlation and the kappa family.
//! * [`curves`] projects a sweep onto each chart family (ROC, BOC, PN, PR,
//!   LIFT, BIFT, BPRD, BIRD) together with its reference lines.
//! * [`geometry`] integrates curves, checks the dual-area identities, builds
//!   the ROC convex hull and selects isocost operating points.
//! * [`render`] writes SVG charts and curve CSV tables.
//! * [`run`] wires everything to files for the command-line tool.

pub mod curves;
pub mod error;
pub mod geometry;
pub mod metrics;
pub mod model;
pub mod render;
pub mod run;
pub mod sweep;

pub use curves::{build_curve, reference_lines, ChartKind, Curve, CurvePoint, ReferenceLine};
pub use error::{Error, Result};
pub use geometry::{area_identities, area_under, best_operating_point, rank_auc, roch_hull};
pub use model::{ConfusionTable, Dataset, DichotomousStats};
pub use sweep::{ClassSweep, SmoothedRates, SweepPoint};
