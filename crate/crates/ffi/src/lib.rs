//! C ABI for rocbird.
//!
//! Datasets and sweeps are opaque heap handles released with their `_free`
//! function. Every fallible call returns an [`RbStatus`]; on failure a
//! description is available from [`rb_last_error`] on the same thread.
//! Strings returned through `out` parameters are owned by the caller and must
//! be released with [`rb_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use rocbird::metrics::DichotomousReport;
use rocbird::render::write_curve_csv;
use rocbird::run::{evaluate, parse_input_csv, RunConfig};
use rocbird::{
    area_identities, best_operating_point, build_curve, rank_auc, ChartKind, ClassSweep, Dataset,
    DichotomousStats, Error,
};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RbStatus {
    Ok = 0,
    NullPointer = 1,
    /// An argument is outside its domain (bad index, negative smoothing...).
    Domain = 2,
    /// The class has no positives or no negatives.
    Degenerate = 3,
    Parse = 4,
    Unsupported = 5,
    Config = 6,
    Io = 7,
    /// A Rust panic was caught at the boundary.
    Panic = 8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RbChartKind {
    Pn = 0,
    DeltaPn = 1,
    Roc = 2,
    Boc = 3,
    Pr = 4,
    PrReciprocal = 5,
    PrLog = 6,
    Lift = 7,
    Bift = 8,
    Bprd = 9,
    Bird = 10,
}

impl From<RbChartKind> for ChartKind {
    fn from(k: RbChartKind) -> Self {
        match k {
            RbChartKind::Pn => ChartKind::Pn,
            RbChartKind::DeltaPn => ChartKind::DeltaPn,
            RbChartKind::Roc => ChartKind::Roc,
            RbChartKind::Boc => ChartKind::Boc,
            RbChartKind::Pr => ChartKind::Pr,
            RbChartKind::PrReciprocal => ChartKind::PrReciprocal,
            RbChartKind::PrLog => ChartKind::PrLog,
            RbChartKind::Lift => ChartKind::Lift,
            RbChartKind::Bift => ChartKind::Bift,
            RbChartKind::Bprd => ChartKind::Bprd,
            RbChartKind::Bird => ChartKind::Bird,
        }
    }
}

/// Opaque dataset handle.
pub struct RbDataset(Dataset);

/// Opaque one-vs-rest sweep handle.
pub struct RbSweep(ClassSweep);

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RbSweepPoint {
    pub theta: f64,
    pub tp: u64,
    pub fp: u64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RbAreas {
    pub auroc: f64,
    pub auroc_dual: f64,
    pub auboc: f64,
    pub auboc_dual: f64,
    pub aubift: f64,
    pub gini: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RbOperatingPoint {
    pub index: usize,
    pub theta: f64,
    pub fpr: f64,
    pub tpr: f64,
    pub informedness: f64,
}

/// Dichotomous measures; undefined ones are NaN.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RbReport {
    pub recall: f64,
    pub inv_recall: f64,
    pub precision: f64,
    pub inv_precision: f64,
    pub fallout: f64,
    pub accuracy: f64,
    pub f1: f64,
    pub informedness: f64,
    pub markedness: f64,
    pub correlation: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn status_of(e: &Error) -> RbStatus {
    match e {
        Error::Domain(_) => RbStatus::Domain,
        Error::DegenerateClass { .. } | Error::DegenerateStats { .. } => RbStatus::Degenerate,
        Error::UnsupportedKind(_) => RbStatus::Unsupported,
        Error::Parse { .. } | Error::Json(_) => RbStatus::Parse,
        Error::Config(_) => RbStatus::Config,
        Error::Io(_) => RbStatus::Io,
    }
}

enum Failure {
    Null(&'static str),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

/// Runs `f`, converting errors and panics into a status code.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> RbStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => RbStatus::Ok,
        Ok(Err(Failure::Null(what))) => {
            set_error(format!("{what} is null"));
            RbStatus::NullPointer
        }
        Ok(Err(Failure::Lib(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(panic) => {
            let msg = panic
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| panic.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("internal error: {msg}"));
            RbStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or(Failure::Null(what))
}

unsafe fn out<'a, T>(p: *mut T, what: &'static str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or(Failure::Null(what))
}

unsafe fn text<'a>(p: *const c_char, what: &'static str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure::Null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|e| {
        Failure::Lib(Error::Parse {
            line: 0,
            message: format!("{what} is not UTF-8: {e}"),
        })
    })
}

fn owned_string(s: String) -> *mut c_char {
    CString::new(s)
        .expect("library output has no nul bytes")
        .into_raw()
}

/// Message for the most recent failure on this thread, or null. Valid until
/// the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn rb_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Parses CSV text with a `label` column and one `score_<class>` column per
/// class.
///
/// # Safety
/// `csv` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rb_dataset_from_csv(
    csv: *const c_char,
    out_dataset: *mut *mut RbDataset,
) -> RbStatus {
    guard(|| {
        let slot = out(out_dataset, "out_dataset")?;
        let d = parse_input_csv(text(csv, "csv")?)?;
        *slot = Box::into_raw(Box::new(RbDataset(d)));
        Ok(())
    })
}

/// Builds a dataset from `n` labels and a row-major `n * k` score matrix.
///
/// # Safety
/// `class_names` must hold `k` nul-terminated strings, `labels` `n` entries
/// and `scores` `n * k` entries.
#[no_mangle]
pub unsafe extern "C" fn rb_dataset_from_arrays(
    k: usize,
    class_names: *const *const c_char,
    n: usize,
    labels: *const usize,
    scores: *const f64,
    out_dataset: *mut *mut RbDataset,
) -> RbStatus {
    guard(|| {
        let slot = out(out_dataset, "out_dataset")?;
        if class_names.is_null() || labels.is_null() || scores.is_null() {
            return Err(Failure::Null("input array"));
        }
        let names = std::slice::from_raw_parts(class_names, k)
            .iter()
            .map(|&p| text(p, "class name").map(str::to_owned))
            .collect::<Result<Vec<_>, _>>()?;
        let total = n
            .checked_mul(k)
            .ok_or_else(|| Error::Domain("n * k overflows".into()))?;
        let labels = std::slice::from_raw_parts(labels, n).to_vec();
        let scores = std::slice::from_raw_parts(scores, total).to_vec();
        let d = Dataset::from_flat(names, labels, scores)?;
        *slot = Box::into_raw(Box::new(RbDataset(d)));
        Ok(())
    })
}

/// # Safety
/// `dataset` must come from an `rb_dataset_*` constructor, or be null.
#[no_mangle]
pub unsafe extern "C" fn rb_dataset_free(dataset: *mut RbDataset) {
    if !dataset.is_null() {
        drop(Box::from_raw(dataset));
    }
}

/// Number of instances; 0 for a null handle.
///
/// # Safety
/// `dataset` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn rb_dataset_len(dataset: *const RbDataset) -> usize {
    dataset.as_ref().map_or(0, |d| d.0.len())
}

/// Number of classes; 0 for a null handle.
///
/// # Safety
/// `dataset` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn rb_dataset_num_classes(dataset: *const RbDataset) -> usize {
    dataset.as_ref().map_or(0, |d| d.0.num_classes())
}

/// # Safety
/// `dataset` must be a live handle; `out_sweep` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rb_sweep_new(
    dataset: *const RbDataset,
    class_index: usize,
    out_sweep: *mut *mut RbSweep,
) -> RbStatus {
    guard(|| {
        let slot = out(out_sweep, "out_sweep")?;
        let d = deref(dataset, "dataset")?;
        if class_index >= d.0.num_classes() {
            return Err(Error::Domain(format!("class index {class_index} out of range")).into());
        }
        *slot = Box::into_raw(Box::new(RbSweep(ClassSweep::new(&d.0, class_index)?)));
        Ok(())
    })
}

/// # Safety
/// `sweep` must come from [`rb_sweep_new`], or be null.
#[no_mangle]
pub unsafe extern "C" fn rb_sweep_free(sweep: *mut RbSweep) {
    if !sweep.is_null() {
        drop(Box::from_raw(sweep));
    }
}

/// Number of sweep points (distinct scores + 1); 0 for a null handle.
///
/// # Safety
/// `sweep` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn rb_sweep_len(sweep: *const RbSweep) -> usize {
    sweep.as_ref().map_or(0, |s| s.0.len())
}

/// # Safety
/// `sweep` must be a live handle; `out_point` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rb_sweep_point(
    sweep: *const RbSweep,
    index: usize,
    out_point: *mut RbSweepPoint,
) -> RbStatus {
    guard(|| {
        let slot = out(out_point, "out_point")?;
        let s = deref(sweep, "sweep")?;
        let p =
            s.0.points()
                .get(index)
                .ok_or_else(|| Error::Domain(format!("point {index} out of range")))?;
        *slot = RbSweepPoint {
            theta: p.theta,
            tp: p.tp,
            fp: p.fp,
        };
        Ok(())
    })
}

/// Pairwise-ranking AUC of one class against the rest.
///
/// # Safety
/// `dataset` must be a live handle; `out_auc` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rb_rank_auc(
    dataset: *const RbDataset,
    class_index: usize,
    out_auc: *mut f64,
) -> RbStatus {
    guard(|| {
        let slot = out(out_auc, "out_auc")?;
        let d = deref(dataset, "dataset")?;
        *slot = rank_auc(&d.0, class_index)?;
        Ok(())
    })
}

/// # Safety
/// `sweep` must be a live handle; `out_areas` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rb_area_identities(
    sweep: *const RbSweep,
    out_areas: *mut RbAreas,
) -> RbStatus {
    guard(|| {
        let slot = out(out_areas, "out_areas")?;
        let a = area_identities(&deref(sweep, "sweep")?.0)?;
        *slot = RbAreas {
            auroc: a.auroc,
            auroc_dual: a.auroc_dual,
            auboc: a.auboc,
            auboc_dual: a.auboc_dual,
            aubift: a.aubift,
            gini: a.gini,
        };
        Ok(())
    })
}

/// # Safety
/// `sweep` must be a live handle; `out_point` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rb_best_operating_point(
    sweep: *const RbSweep,
    cost_skew: f64,
    out_point: *mut RbOperatingPoint,
) -> RbStatus {
    guard(|| {
        let slot = out(out_point, "out_point")?;
        let p = best_operating_point(&deref(sweep, "sweep")?.0, cost_skew)?;
        *slot = RbOperatingPoint {
            index: p.index,
            theta: p.theta,
            fpr: p.fpr,
            tpr: p.tpr,
            informedness: p.informedness,
        };
        Ok(())
    })
}

/// Measures of a 2x2 table given as probabilities summing to 1.
///
/// # Safety
/// `out_report` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rb_dichotomous_report(
    tp: f64,
    fp: f64,
    fn_: f64,
    tn: f64,
    out_report: *mut RbReport,
) -> RbStatus {
    guard(|| {
        let slot = out(out_report, "out_report")?;
        let r = DichotomousReport::from_stats(&DichotomousStats::new(tp, fp, fn_, tn)?)?;
        let or_nan = |v: Option<f64>| v.unwrap_or(f64::NAN);
        *slot = RbReport {
            recall: r.recall,
            inv_recall: r.inv_recall,
            precision: or_nan(r.precision),
            inv_precision: or_nan(r.inv_precision),
            fallout: r.fallout,
            accuracy: r.accuracy,
            f1: r.f1,
            informedness: r.informedness,
            markedness: or_nan(r.markedness),
            correlation: or_nan(r.correlation),
        };
        Ok(())
    })
}

/// Curve table (`chart,class,theta,x,y`) of one sweep on one chart.
///
/// # Safety
/// `sweep` must be a live handle, `class_name` a nul-terminated string and
/// `out_csv` writable.
#[no_mangle]
pub unsafe extern "C" fn rb_curve_csv(
    sweep: *const RbSweep,
    kind: RbChartKind,
    smoothing: f64,
    class_name: *const c_char,
    out_csv: *mut *mut c_char,
) -> RbStatus {
    guard(|| {
        let slot = out(out_csv, "out_csv")?;
        let s = &deref(sweep, "sweep")?.0;
        let name = text(class_name, "class_name")?;
        let curve = build_curve(s, kind.into(), smoothing)?;
        // The writer looks names up by class index.
        let mut names = vec![String::new(); s.class_index() + 1];
        names[s.class_index()] = name.to_owned();
        *slot = owned_string(write_curve_csv(&[curve], &names));
        Ok(())
    })
}

/// The JSON summary the command-line tool writes, for every class.
///
/// # Safety
/// `dataset` must be a live handle; `out_json` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rb_summary_json(
    dataset: *const RbDataset,
    smoothing: f64,
    cost_skew: f64,
    out_json: *mut *mut c_char,
) -> RbStatus {
    guard(|| {
        let slot = out(out_json, "out_json")?;
        let d = deref(dataset, "dataset")?;
        let mut config = RunConfig::new("", "");
        config.smoothing = smoothing;
        config.cost_skew = cost_skew;
        config.charts.clear();
        *slot = owned_string(evaluate(&d.0, &config)?.summary.to_json()?);
        Ok(())
    })
}

/// # Safety
/// `s` must come from this library, or be null.
#[no_mangle]
pub unsafe extern "C" fn rb_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
