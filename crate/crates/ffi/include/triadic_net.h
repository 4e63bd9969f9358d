#ifndef TRIADIC_NET_H
#define TRIADIC_NET_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every call.
 */
typedef enum TnStatus {
  TN_STATUS_OK = 0,
  TN_STATUS_NULL_POINTER = 1,
  TN_STATUS_INVALID_ARGUMENT = 2,
  TN_STATUS_IO_ERROR = 3,
  TN_STATUS_PARSE_ERROR = 4,
  TN_STATUS_MEASURE_ERROR = 5,
  TN_STATUS_RUN_COMPLETE = 6,
  TN_STATUS_PANIC = 7,
} TnStatus;

/**
 * An immutable event log.
 */
typedef struct TnLog TnLog;

/**
 * A running simulation.
 */
typedef struct TnSimulation TnSimulation;

/**
 * Growth model parameters; fill with [`tn_model_params_default`] first.
 */
typedef struct TnModelParams {
  size_t m;
  size_t n;
  double mu;
  double phi0;
  double theta_min;
  double theta_max;
  size_t n0;
  size_t m0;
  size_t n_final;
  uint64_t seed;
  size_t walk_retries;
  /**
   * Nonzero: recipients of new social links are reset as well.
   */
  uint8_t reset_recipients;
} TnModelParams;

typedef struct TnTickReport {
  int64_t tick;
  size_t activated;
  size_t new_items;
  size_t social_links;
  size_t cross_links;
  size_t failed_walks;
  size_t triadic_links;
} TnTickReport;

/**
 * Attachment exponents; NaN where no fit was possible.
 */
typedef struct TnPaResult {
  double alpha;
  double alpha_triadic;
  double alpha_nontriadic;
  size_t windows;
  uint64_t links;
} TnPaResult;

/**
 * Growth exponents; NaN where no fit was possible.
 */
typedef struct TnGrowthResult {
  double beta_r;
  double beta_sigma;
  size_t nodes;
} TnGrowthResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. Valid until the
 * next call on the same thread.
 */
const char *tn_last_error_message(void);

/**
 * Library version as a static string.
 */
const char *tn_version(void);

/**
 * Writes the reference parameter set into `out`.
 *
 * # Safety
 * `out` must be null or valid for writes.
 */
enum TnStatus tn_model_params_default(struct TnModelParams *out);

/**
 * Builds the seed network. On success `*out` owns a new handle.
 *
 * # Safety
 * `params` must be null or point to a valid struct; `out` must be null or
 * valid for writes.
 */
enum TnStatus tn_simulation_new(const struct TnModelParams *params, struct TnSimulation **out);

/**
 * Advances one tick. Returns `RunComplete` once the target size is reached.
 *
 * # Safety
 * `sim` must be a live handle; `report` may be null.
 */
enum TnStatus tn_simulation_step(struct TnSimulation *sim, struct TnTickReport *report);

/**
 * Steps until the target number of users exists.
 *
 * # Safety
 * `sim` must be a live handle.
 */
enum TnStatus tn_simulation_run(struct TnSimulation *sim);

/**
 * # Safety
 * `sim` must be a live handle; `users` and `items` may be null.
 */
enum TnStatus tn_simulation_size(const struct TnSimulation *sim, size_t *users, size_t *items);

/**
 * Copies the events so far into a new log handle.
 *
 * # Safety
 * `sim` must be a live handle; `out` must be null or valid for writes.
 */
enum TnStatus tn_simulation_log(const struct TnSimulation *sim, struct TnLog **out);

/**
 * # Safety
 * `sim` must be null or a handle not yet freed.
 */
void tn_simulation_free(struct TnSimulation *sim);

/**
 * Reads a canonical log file.
 *
 * # Safety
 * `path` must be a NUL-terminated string; `out` must be null or valid for
 * writes.
 */
enum TnStatus tn_log_load(const char *path, struct TnLog **out);

/**
 * Writes a canonical log file.
 *
 * # Safety
 * `log` must be a live handle and `path` a NUL-terminated string.
 */
enum TnStatus tn_log_save(const struct TnLog *log, const char *path);

/**
 * # Safety
 * `log` must be a live handle; `out` must be null or valid for writes.
 */
enum TnStatus tn_log_len(const struct TnLog *log, size_t *out);

/**
 * # Safety
 * `log` must be null or a handle not yet freed.
 */
void tn_log_free(struct TnLog *log);

/**
 * Attachment exponents of `gain` links against degree `by` (labels such as
 * `"kf"`, `"ks"`, `"kp"`), over windows `[t0s[i], t0s[i] + dt]`.
 *
 * # Safety
 * `log` must be a live handle, `gain` and `by` NUL-terminated strings,
 * `t0s` valid for `n_t0` reads and `out` valid for writes.
 */
enum TnStatus tn_measure_pa(const struct TnLog *log,
                            const char *gain,
                            const char *by,
                            const int64_t *t0s,
                            size_t n_t0,
                            int64_t dt,
                            struct TnPaResult *out);

/**
 * Growth-rate exponents of degree `kind` between times `t0` and `t1`.
 *
 * # Safety
 * `log` must be a live handle, `kind` a NUL-terminated string and `out`
 * valid for writes.
 */
enum TnStatus tn_measure_growth(const struct TnLog *log,
                                const char *kind,
                                int64_t t0,
                                int64_t t1,
                                struct TnGrowthResult *out);

/**
 * Pearson correlation of two user degrees on the final snapshot.
 *
 * # Safety
 * `log` must be a live handle, `a` and `b` NUL-terminated strings and
 * `out` valid for writes.
 */
enum TnStatus tn_measure_pcc(const struct TnLog *log, const char *a, const char *b, double *out);

/**
 * Share of explicit links that closed a triangle: `social` nonzero for
 * social links, zero for favorites.
 *
 * # Safety
 * `log` must be a live handle and `out` valid for writes.
 */
enum TnStatus tn_measure_triadic_fraction(const struct TnLog *log, uint8_t social, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TRIADIC_NET_H */
