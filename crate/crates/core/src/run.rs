//! Input parsing, whole-dataset evaluation and file output for the
//! command-line tool.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Serialize, Serializer};

use crate::curves::{build_curve, reference_lines, ChartKind, Curve, ReferenceLine};
use crate::error::{Error, Result};
use crate::geometry::{area_identities, best_operating_point, roch_hull};
use crate::metrics::{cohen_kappa, fleiss_kappa, multiclass_aggregates, DichotomousReport};
use crate::model::Dataset;
use crate::render::{render_chart, write_curve_csv, ChartStyle};
use crate::sweep::{ClassSweep, DEFAULT_SMOOTHING};

const SCORE_PREFIX: &str = "score_";
const LOG_BASE: u32 = 2;

/// Parses `label,score_<name>,...` text. Class order follows the score
/// columns; every label must name one of them.
pub fn parse_input_csv(text: &str) -> Result<Dataset> {
    let mut reader = ::csv::ReaderBuilder::new()
        .flexible(true)
        .trim(::csv::Trim::All)
        .from_reader(text.as_bytes());
    let header = reader
        .headers()
        .map_err(|e| Error::parse(1, e.to_string()))?
        .clone();

    let mut label_col = None;
    let mut score_cols = Vec::new();
    let mut class_names: Vec<String> = Vec::new();
    for (j, field) in header.iter().enumerate() {
        if field == "label" {
            if label_col.replace(j).is_some() {
                return Err(Error::parse(1, "duplicate label column"));
            }
        } else if let Some(name) = field.strip_prefix(SCORE_PREFIX).filter(|n| !n.is_empty()) {
            if class_names.iter().any(|n| n == name) {
                return Err(Error::parse(
                    1,
                    format!("duplicate score column for class {name:?}"),
                ));
            }
            class_names.push(name.to_string());
            score_cols.push(j);
        } else {
            return Err(Error::parse(
                1,
                format!("unexpected column {field:?}; expected `label` or `{SCORE_PREFIX}<class>`"),
            ));
        }
    }
    let label_col = label_col.ok_or_else(|| Error::parse(1, "missing `label` column"))?;
    if class_names.len() < 2 {
        return Err(Error::Config(format!(
            "need at least 2 score columns, found {}",
            class_names.len()
        )));
    }

    let width = header.len();
    let mut labels = Vec::new();
    let mut scores = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            Error::parse(line, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        if record.len() != width {
            return Err(Error::parse(
                line,
                format!("expected {width} fields, found {}", record.len()),
            ));
        }
        let label = &record[label_col];
        let class = class_names.iter().position(|n| n == label).ok_or_else(|| {
            Error::parse(
                line,
                format!("label {label:?} has no `{SCORE_PREFIX}{label}` column"),
            )
        })?;
        labels.push(class);
        for &j in &score_cols {
            let value: f64 = record[j].parse().map_err(|_| {
                Error::parse(line, format!("score {:?} is not a number", &record[j]))
            })?;
            if !value.is_finite() {
                return Err(Error::parse(
                    line,
                    format!("score {:?} is not finite", &record[j]),
                ));
            }
            scores.push(value);
        }
    }
    if labels.is_empty() {
        return Err(Error::parse(1, "no data rows"));
    }
    Dataset::from_flat(class_names, labels, scores)
}

/// Which artifacts a run writes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Outputs {
    pub summary: bool,
    pub curve_tables: bool,
    pub charts: bool,
}

impl Outputs {
    pub const ALL: Outputs = Outputs {
        summary: true,
        curve_tables: true,
        charts: true,
    };
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub input: PathBuf,
    pub output_dir: PathBuf,
    pub charts: Vec<ChartKind>,
    /// Class names to evaluate; `None` means all.
    pub classes: Option<Vec<String>>,
    pub smoothing: f64,
    pub cost_skew: f64,
    pub isobar_levels: Vec<f64>,
    pub skip_degenerate: bool,
    pub outputs: Outputs,
}

impl RunConfig {
    pub fn new(input: impl Into<PathBuf>, output_dir: impl Into<PathBuf>) -> Self {
        RunConfig {
            input: input.into(),
            output_dir: output_dir.into(),
            charts: ChartKind::ALL.to_vec(),
            classes: None,
            smoothing: DEFAULT_SMOOTHING,
            cost_skew: 1.0,
            isobar_levels: ChartStyle::default().isobar_levels,
            skip_degenerate: false,
            outputs: Outputs::ALL,
        }
    }

    /// Rejects settings that would fail part-way through a run.
    pub fn validate(&self) -> Result<()> {
        if !self.smoothing.is_finite() || self.smoothing < 0.0 {
            return Err(Error::Config(format!(
                "smoothing must be finite and >= 0, got {}",
                self.smoothing
            )));
        }
        if let Some(kind) = self.charts.iter().find(|k| k.needs_smoothing()) {
            if self.smoothing <= 0.0 {
                return Err(Error::Config(format!(
                    "{kind} needs smoothing > 0, got {}",
                    self.smoothing
                )));
            }
        }
        if !(self.cost_skew.is_finite() && self.cost_skew > 0.0) {
            return Err(Error::Config(format!(
                "cost skew must be finite and > 0, got {}",
                self.cost_skew
            )));
        }
        if let Some(level) = self.isobar_levels.iter().find(|l| !l.is_finite()) {
            return Err(Error::Config(format!("isobar level {level} is not finite")));
        }
        Ok(())
    }
}

fn serialize_threshold<S: Serializer>(theta: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if theta.is_finite() {
        s.serialize_f64(*theta)
    } else if *theta < 0.0 {
        s.serialize_str("-inf")
    } else {
        s.serialize_str("inf")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BestPoint {
    #[serde(serialize_with = "serialize_threshold")]
    pub theta: f64,
    pub fpr: f64,
    pub tpr: f64,
}

/// Per-class results. Threshold-dependent measures are taken at the
/// cost-skew optimal operating point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassSummary {
    pub class: String,
    pub index: usize,
    pub positives: u64,
    pub negatives: u64,
    pub prevalence: f64,
    pub bias: f64,
    pub recall: f64,
    pub precision: Option<f64>,
    pub f1: f64,
    pub informedness: f64,
    pub markedness: Option<f64>,
    pub correlation: Option<f64>,
    pub auroc: f64,
    pub auboc: f64,
    pub gini: f64,
    pub aubift: f64,
    pub hull_vertices: usize,
    pub best_operating_point: BestPoint,
}

/// Aggregates over the argmax decisions of the whole dataset.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MulticlassSummary {
    pub accuracy: f64,
    pub bookmaker_informedness: Option<f64>,
    pub markedness: Option<f64>,
    pub correlation: Option<f64>,
    pub cohen_kappa: Option<f64>,
    pub fleiss_kappa: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub instances: usize,
    pub num_classes: usize,
    pub smoothing: f64,
    pub cost_skew: f64,
    pub log_base: u32,
    pub classes: Vec<ClassSummary>,
    pub multiclass: MulticlassSummary,
}

impl Summary {
    /// Pretty-printed JSON with a trailing newline, as written to
    /// `summary.json`.
    pub fn to_json(&self) -> Result<String> {
        let mut json = serde_json::to_string_pretty(self)?;
        json.push('\n');
        Ok(json)
    }
}

/// Everything a run computes, before anything is written.
#[derive(Debug, Clone)]
pub struct Evaluation {
    pub summary: Summary,
    pub curves: BTreeMap<ChartKind, Vec<Curve>>,
    pub reference_lines: BTreeMap<ChartKind, Vec<ReferenceLine>>,
    pub class_names: Vec<String>,
    pub warnings: Vec<String>,
}

fn selected_classes(dataset: &Dataset, config: &RunConfig) -> Result<Vec<usize>> {
    match &config.classes {
        None => Ok((0..dataset.num_classes()).collect()),
        Some(names) => {
            let mut picked = Vec::new();
            for name in names {
                let c = dataset
                    .class_index(name)
                    .ok_or_else(|| Error::Config(format!("unknown class {name:?}")))?;
                if !picked.contains(&c) {
                    picked.push(c);
                }
            }
            picked.sort_unstable();
            Ok(picked)
        }
    }
}

fn summarize_class(dataset: &Dataset, sweep: &ClassSweep, cost_skew: f64) -> Result<ClassSummary> {
    let best = best_operating_point(sweep, cost_skew)?;
    let stats = sweep.stats_at(best.index)?;
    let report = DichotomousReport::from_stats(&stats)?;
    let areas = area_identities(sweep)?;
    let hull = roch_hull(sweep)?;
    Ok(ClassSummary {
        class: dataset.class_names()[sweep.class_index()].clone(),
        index: sweep.class_index(),
        positives: sweep.rp(),
        negatives: sweep.rn(),
        prevalence: stats.prevalence(),
        bias: stats.bias(),
        recall: report.recall,
        precision: report.precision,
        f1: report.f1,
        informedness: report.informedness,
        markedness: report.markedness,
        correlation: report.correlation,
        auroc: areas.auroc,
        auboc: areas.auboc,
        gini: areas.gini,
        aubift: areas.aubift,
        hull_vertices: hull.len() + 1,
        best_operating_point: BestPoint {
            theta: best.theta,
            fpr: best.fpr,
            tpr: best.tpr,
        },
    })
}

fn summarize_multiclass(dataset: &Dataset, warnings: &mut Vec<String>) -> MulticlassSummary {
    let table = dataset.confusion_table();
    let aggregates = match multiclass_aggregates(&table) {
        Ok(a) => Some(a),
        Err(Error::DegenerateClass { class, .. }) => {
            warnings.push(format!(
                "class {:?} has no positives or no negatives; multiclass informedness is undefined",
                dataset.class_names()[class]
            ));
            None
        }
        Err(e) => {
            warnings.push(format!("multiclass aggregates unavailable: {e}"));
            None
        }
    };
    MulticlassSummary {
        accuracy: table.trace() as f64 / table.total() as f64,
        bookmaker_informedness: aggregates.map(|a| a.bookmaker_informedness),
        markedness: aggregates.and_then(|a| a.markedness),
        correlation: aggregates.and_then(|a| a.correlation),
        cohen_kappa: cohen_kappa(&table).ok(),
        fleiss_kappa: fleiss_kappa(&table).ok(),
    }
}

/// Computes the summary, curves and reference lines for a parsed dataset.
pub fn evaluate(dataset: &Dataset, config: &RunConfig) -> Result<Evaluation> {
    config.validate()?;
    let mut warnings = Vec::new();
    let mut sweeps = Vec::new();
    for c in selected_classes(dataset, config)? {
        match ClassSweep::new(dataset, c) {
            Ok(sweep) => sweeps.push(sweep),
            Err(Error::DegenerateClass {
                positives,
                negatives,
                ..
            }) => {
                let name = &dataset.class_names()[c];
                let msg = format!(
                    "class {name:?} is degenerate ({positives} positives, {negatives} negatives)"
                );
                if config.skip_degenerate {
                    warnings.push(format!("skipping {msg}"));
                } else {
                    return Err(Error::Config(format!(
                        "{msg}; use --skip-degenerate to skip it"
                    )));
                }
            }
            Err(e) => return Err(e),
        }
    }

    let classes = sweeps
        .iter()
        .map(|s| summarize_class(dataset, s, config.cost_skew))
        .collect::<Result<Vec<_>>>()?;
    let multiclass = summarize_multiclass(dataset, &mut warnings);

    let mut curves = BTreeMap::new();
    let mut refs = BTreeMap::new();
    for &kind in &config.charts {
        if curves.contains_key(&kind) {
            continue;
        }
        let mut kind_curves = Vec::with_capacity(sweeps.len());
        let mut kind_refs = Vec::new();
        for sweep in &sweeps {
            kind_curves.push(build_curve(sweep, kind, config.smoothing)?);
            kind_refs.extend(reference_lines(
                kind,
                sweep,
                &config.isobar_levels,
                config.smoothing,
            ));
        }
        curves.insert(kind, kind_curves);
        refs.insert(kind, kind_refs);
    }

    Ok(Evaluation {
        summary: Summary {
            instances: dataset.len(),
            num_classes: dataset.num_classes(),
            smoothing: config.smoothing,
            cost_skew: config.cost_skew,
            log_base: LOG_BASE,
            classes,
            multiclass,
        },
        curves,
        reference_lines: refs,
        class_names: dataset.class_names().to_vec(),
        warnings,
    })
}

/// Files written and warnings raised by [`run`].
#[derive(Debug, Clone, Default)]
pub struct RunReport {
    pub written: Vec<PathBuf>,
    pub warnings: Vec<String>,
}

fn write_file(dir: &Path, name: &str, contents: &str, report: &mut RunReport) -> Result<()> {
    let path = dir.join(name);
    fs::write(&path, contents)?;
    report.written.push(path);
    Ok(())
}

/// Reads the input, evaluates it and writes the requested artifacts:
/// `summary.json`, `<chart>.csv` and `<chart>.svg`.
pub fn run(config: &RunConfig) -> Result<RunReport> {
    config.validate()?;
    let text = fs::read_to_string(&config.input)?;
    let dataset = parse_input_csv(&text)?;
    let eval = evaluate(&dataset, config)?;

    fs::create_dir_all(&config.output_dir)?;
    let mut report = RunReport {
        warnings: eval.warnings.clone(),
        ..Default::default()
    };
    if config.outputs.summary {
        write_file(
            &config.output_dir,
            "summary.json",
            &eval.summary.to_json()?,
            &mut report,
        )?;
    }
    for (kind, curves) in &eval.curves {
        if config.outputs.curve_tables {
            let csv = write_curve_csv(curves, &eval.class_names);
            write_file(
                &config.output_dir,
                &format!("{}.csv", kind.file_stem()),
                &csv,
                &mut report,
            )?;
        }
        if config.outputs.charts && !curves.is_empty() {
            let style = ChartStyle {
                isobar_levels: config.isobar_levels.clone(),
                ..ChartStyle::for_kind(*kind)
            };
            let svg = render_chart(
                curves,
                &eval.reference_lines[kind],
                &style,
                &eval.class_names,
            )?;
            write_file(
                &config.output_dir,
                &format!("{}.svg", kind.file_stem()),
                &svg,
                &mut report,
            )?;
        }
    }
    Ok(report)
}
