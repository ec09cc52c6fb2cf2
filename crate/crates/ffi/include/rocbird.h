#ifndef ROCBIRD_H
#define ROCBIRD_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stddef.h>
#include <stdint.h>

typedef enum RbChartKind {
  RB_CHART_KIND_PN = 0,
  RB_CHART_KIND_DELTA_PN = 1,
  RB_CHART_KIND_ROC = 2,
  RB_CHART_KIND_BOC = 3,
  RB_CHART_KIND_PR = 4,
  RB_CHART_KIND_PR_RECIPROCAL = 5,
  RB_CHART_KIND_PR_LOG = 6,
  RB_CHART_KIND_LIFT = 7,
  RB_CHART_KIND_BIFT = 8,
  RB_CHART_KIND_BPRD = 9,
  RB_CHART_KIND_BIRD = 10,
} RbChartKind;

typedef enum RbStatus {
  RB_STATUS_OK = 0,
  RB_STATUS_NULL_POINTER = 1,
  /**
   * An argument is outside its domain (bad index, negative smoothing...).
   */
  RB_STATUS_DOMAIN = 2,
  /**
   * The class has no positives or no negatives.
   */
  RB_STATUS_DEGENERATE = 3,
  RB_STATUS_PARSE = 4,
  RB_STATUS_UNSUPPORTED = 5,
  RB_STATUS_CONFIG = 6,
  RB_STATUS_IO = 7,
  /**
   * A Rust panic was caught at the boundary.
   */
  RB_STATUS_PANIC = 8,
} RbStatus;

/**
 * Opaque dataset handle.
 */
typedef struct RbDataset RbDataset;

/**
 * Opaque one-vs-rest sweep handle.
 */
typedef struct RbSweep RbSweep;

typedef struct RbSweepPoint {
  double theta;
  uint64_t tp;
  uint64_t fp;
} RbSweepPoint;

typedef struct RbAreas {
  double auroc;
  double auroc_dual;
  double auboc;
  double auboc_dual;
  double aubift;
  double gini;
} RbAreas;

typedef struct RbOperatingPoint {
  size_t index;
  double theta;
  double fpr;
  double tpr;
  double informedness;
} RbOperatingPoint;

/**
 * Dichotomous measures; undefined ones are NaN.
 */
typedef struct RbReport {
  double recall;
  double inv_recall;
  double precision;
  double inv_precision;
  double fallout;
  double accuracy;
  double f1;
  double informedness;
  double markedness;
  double correlation;
} RbReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread, or null. Valid until
 * the next failing call on the same thread.
 */
const char *rb_last_error(void);

/**
 * Parses CSV text with a `label` column and one `score_<class>` column per
 * class.
 *
 * # Safety
 * `csv` must be a nul-terminated string; `out` must be writable.
 */
enum RbStatus rb_dataset_from_csv(const char *csv, struct RbDataset **out_dataset);

/**
 * Builds a dataset from `n` labels and a row-major `n * k` score matrix.
 *
 * # Safety
 * `class_names` must hold `k` nul-terminated strings, `labels` `n` entries
 * and `scores` `n * k` entries.
 */
enum RbStatus rb_dataset_from_arrays(size_t k,
                                     const char *const *class_names,
                                     size_t n,
                                     const size_t *labels,
                                     const double *scores,
                                     struct RbDataset **out_dataset);

/**
 * # Safety
 * `dataset` must come from an `rb_dataset_*` constructor, or be null.
 */
void rb_dataset_free(struct RbDataset *dataset);

/**
 * Number of instances; 0 for a null handle.
 *
 * # Safety
 * `dataset` must be a live handle or null.
 */
size_t rb_dataset_len(const struct RbDataset *dataset);

/**
 * Number of classes; 0 for a null handle.
 *
 * # Safety
 * `dataset` must be a live handle or null.
 */
size_t rb_dataset_num_classes(const struct RbDataset *dataset);

/**
 * # Safety
 * `dataset` must be a live handle; `out_sweep` must be writable.
 */
enum RbStatus rb_sweep_new(const struct RbDataset *dataset,
                           size_t class_index,
                           struct RbSweep **out_sweep);

/**
 * # Safety
 * `sweep` must come from [`rb_sweep_new`], or be null.
 */
void rb_sweep_free(struct RbSweep *sweep);

/**
 * Number of sweep points (distinct scores + 1); 0 for a null handle.
 *
 * # Safety
 * `sweep` must be a live handle or null.
 */
size_t rb_sweep_len(const struct RbSweep *sweep);

/**
 * # Safety
 * `sweep` must be a live handle; `out_point` must be writable.
 */
enum RbStatus rb_sweep_point(const struct RbSweep *sweep,
                             size_t index,
                             struct RbSweepPoint *out_point);

/**
 * Pairwise-ranking AUC of one class against the rest.
 *
 * # Safety
 * `dataset` must be a live handle; `out_auc` must be writable.
 */
enum RbStatus rb_rank_auc(const struct RbDataset *dataset, size_t class_index, double *out_auc);

/**
 * # Safety
 * `sweep` must be a live handle; `out_areas` must be writable.
 */
enum RbStatus rb_area_identities(const struct RbSweep *sweep, struct RbAreas *out_areas);

/**
 * # Safety
 * `sweep` must be a live handle; `out_point` must be writable.
 */
enum RbStatus rb_best_operating_point(const struct RbSweep *sweep,
                                      double cost_skew,
                                      struct RbOperatingPoint *out_point);

/**
 * Measures of a 2x2 table given as probabilities summing to 1.
 *
 * # Safety
 * `out_report` must be writable.
 */
enum RbStatus rb_dichotomous_report(double tp,
                                    double fp,
                                    double fn_,
                                    double tn,
                                    struct RbReport *out_report);

/**
 * Curve table (`chart,class,theta,x,y`) of one sweep on one chart.
 *
 * # Safety
 * `sweep` must be a live handle, `class_name` a nul-terminated string and
 * `out_csv` writable.
 */
enum RbStatus rb_curve_csv(const struct RbSweep *sweep,
                           enum RbChartKind kind,
                           double smoothing,
                           const char *class_name,
                           char **out_csv);

/**
 * The JSON summary the command-line tool writes, for every class.
 *
 * # Safety
 * `dataset` must be a live handle; `out_json` must be writable.
 */
enum RbStatus rb_summary_json(const struct RbDataset *dataset,
                              double smoothing,
                              double cost_skew,
                              char **out_json);

/**
 * # Safety
 * `s` must come from this library, or be null.
 */
void rb_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ROCBIRD_H */
