#ifndef TAXCAST_H
#define TAXCAST_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum TaxcastStatus {
  TAXCAST_STATUS_OK = 0,
  TAXCAST_STATUS_NULL_POINTER = 1,
  TAXCAST_STATUS_PANIC = 2,
  TAXCAST_STATUS_BUFFER_TOO_SMALL = 3,
  TAXCAST_STATUS_INSUFFICIENT_DATA = 10,
  TAXCAST_STATUS_INSUFFICIENT_CONTEXT = 11,
  TAXCAST_STATUS_DIVISION_BY_ZERO = 12,
  TAXCAST_STATUS_ARITY = 13,
  TAXCAST_STATUS_NON_FINITE = 14,
  TAXCAST_STATUS_INVALID_RATE = 15,
  TAXCAST_STATUS_SINGULAR_DESIGN = 16,
  TAXCAST_STATUS_INVALID_NESTING = 17,
  TAXCAST_STATUS_DEGENERATE = 18,
  TAXCAST_STATUS_NON_CONVERGENCE = 19,
  TAXCAST_STATUS_SELECTION_FAILED = 20,
  TAXCAST_STATUS_ALIGNMENT = 21,
  TAXCAST_STATUS_CONFIG = 22,
  TAXCAST_STATUS_INVALID_ARGUMENT = 23,
  TAXCAST_STATUS_IO = 24,
} TaxcastStatus;

/**
 * Deterministic terms of the ADF regression.
 */
typedef enum TaxcastDeterministic {
  TAXCAST_DETERMINISTIC_NONE = 0,
  TAXCAST_DETERMINISTIC_CONSTANT = 1,
  TAXCAST_DETERMINISTIC_CONSTANT_AND_TREND = 2,
} TaxcastDeterministic;

/**
 * Opaque fitted ARIMA model.
 */
typedef struct TaxcastArimaModel TaxcastArimaModel;

/**
 * Opaque annual series.
 */
typedef struct TaxcastSeries TaxcastSeries;

typedef struct TaxcastAdfResult {
  double tau_stat;
  size_t chosen_lag;
  size_t n_effective;
  double critical_1pct;
  double critical_5pct;
  double critical_10pct;
  bool reject_1pct;
  bool reject_5pct;
  bool reject_10pct;
} TaxcastAdfResult;

typedef struct TaxcastArimaSummary {
  size_t p;
  size_t d;
  size_t q;
  double intercept;
  double sigma2;
  double aic;
} TaxcastArimaSummary;

typedef struct TaxcastGrangerResult {
  double f_stat;
  double p_value;
  size_t df_num;
  size_t df_den;
  bool causal_at_5pct;
} TaxcastGrangerResult;

typedef struct TaxcastAccuracy {
  double me;
  double mse;
  double rmse;
  double mae;
  double mpe;
  double mape;
  double smape;
  double theil_u1;
  size_t n;
} TaxcastAccuracy;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL. Valid until the
 * next call into the library on the same thread.
 */
const char *taxcast_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *taxcast_version(void);

/**
 * Copy `len` values into a new series starting at `start_year`.
 *
 * # Safety
 * `values` must point to `len` doubles; `out` must be writable.
 */
enum TaxcastStatus taxcast_series_new(int32_t start_year,
                                      const double *values,
                                      size_t len,
                                      struct TaxcastSeries **out_series);

/**
 * # Safety
 * `series` must be NULL or a handle from `taxcast_series_new` not yet freed.
 */
void taxcast_series_free(struct TaxcastSeries *series);

/**
 * Number of observations, or 0 for NULL.
 *
 * # Safety
 * `series` must be NULL or a live handle.
 */
size_t taxcast_series_len(const struct TaxcastSeries *series);

/**
 * First year, or 0 for NULL.
 *
 * # Safety
 * `series` must be NULL or a live handle.
 */
int32_t taxcast_series_start_year(const struct TaxcastSeries *series);

/**
 * ADF test with AIC lag selection. `max_lag < 0` uses the default rule.
 *
 * # Safety
 * `series` must be a live handle; `out_result` must be writable.
 */
enum TaxcastStatus taxcast_adf_test(const struct TaxcastSeries *series,
                                    enum TaxcastDeterministic deterministic,
                                    int32_t max_lag,
                                    struct TaxcastAdfResult *out_result);

/**
 * Fit ARIMA(p,d,q) by conditional sum of squares.
 *
 * # Safety
 * `series` must be a live handle; `out_model` must be writable.
 */
enum TaxcastStatus taxcast_arima_fit(const struct TaxcastSeries *series,
                                     size_t p,
                                     size_t d,
                                     size_t q,
                                     struct TaxcastArimaModel **out_model);

/**
 * # Safety
 * `model` must be NULL or a handle from `taxcast_arima_fit` not yet freed.
 */
void taxcast_arima_free(struct TaxcastArimaModel *model);

/**
 * Orders and scalar statistics of a fitted model.
 *
 * # Safety
 * `model` must be a live handle; `out_summary` must be writable.
 */
enum TaxcastStatus taxcast_arima_summary(const struct TaxcastArimaModel *model,
                                         struct TaxcastArimaSummary *out_summary);

/**
 * Copy φ into `ar` (capacity `ar_cap ≥ p`) and θ into `ma` (`ma_cap ≥ q`).
 *
 * # Safety
 * `ar`/`ma` must be writable for their capacities (may be NULL when p or q is 0).
 */
enum TaxcastStatus taxcast_arima_coefficients(const struct TaxcastArimaModel *model,
                                              double *ar,
                                              size_t ar_cap,
                                              double *ma,
                                              size_t ma_cap);

/**
 * Forecast `horizon` years after the end of `history` into `out_values`
 * (capacity `cap ≥ horizon`).
 *
 * # Safety
 * Handles must be live; `out_values` must be writable for `cap` doubles.
 */
enum TaxcastStatus taxcast_arima_forecast(const struct TaxcastArimaModel *model,
                                          const struct TaxcastSeries *history,
                                          size_t horizon,
                                          double *out_values,
                                          size_t cap);

/**
 * Does `cause` Granger-cause `effect` at `max_lag` lags?
 *
 * # Safety
 * Handles must be live; `out_result` must be writable.
 */
enum TaxcastStatus taxcast_granger_test(const struct TaxcastSeries *cause,
                                        const struct TaxcastSeries *effect,
                                        size_t max_lag,
                                        struct TaxcastGrangerResult *out_result);

/**
 * Accuracy statistics of `predicted` against `actual` (same years).
 *
 * # Safety
 * Handles must be live; `out_report` must be writable.
 */
enum TaxcastStatus taxcast_error_stats(const struct TaxcastSeries *actual,
                                       const struct TaxcastSeries *predicted,
                                       struct TaxcastAccuracy *out_report);

/**
 * Compound `base` along `n` growth rates; level k goes to `out_levels[k]`.
 *
 * # Safety
 * `rates` must hold `n` doubles; `out_levels` must be writable for `n`.
 */
enum TaxcastStatus taxcast_apply_growth_path(double base,
                                             const double *rates,
                                             size_t n,
                                             double *out_levels);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TAXCAST_H */
