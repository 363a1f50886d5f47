#ifndef H2MATCH_H
#define H2MATCH_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Single-scenario design; the case must hold exactly one scenario.
 */
#define H2M_MODE_DETERMINISTIC 0

/**
 * Design over every scenario of the case, weighted by probability.
 */
#define H2M_MODE_STOCHASTIC 1

/**
 * The case without the hydrogen project, solved stochastically.
 */
#define H2M_MODE_BASELINE 2

/**
 * Result of every fallible call.
 */
typedef enum H2mStatus {
  H2M_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  H2M_STATUS_NULL_POINTER = 1,
  /**
   * Malformed input: bad UTF-8, unparsable case, failed validation.
   */
  H2M_STATUS_INVALID_INPUT = 2,
  H2M_STATUS_IO = 3,
  /**
   * The LP could not be built or was not solved to optimality.
   */
  H2M_STATUS_SOLVE_FAILED = 4,
  /**
   * The requested quantity does not exist for this report.
   */
  H2M_STATUS_NOT_AVAILABLE = 5,
  H2M_STATUS_PANIC = 6,
} H2mStatus;

/**
 * A loaded problem instance.
 */
typedef struct H2mCase H2mCase;

/**
 * Metrics of one solved case.
 */
typedef struct H2mReport H2mReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *h2m_version(void);

/**
 * Message of the last failure on this thread, or null. The pointer stays
 * valid until the next failing call on the same thread.
 */
const char *h2m_last_error(void);

/**
 * Equal annual payment recovering `capex` over `lifetime` years at `rate`.
 *
 * # Safety
 * `out` must be null or point to writable memory for one `double`.
 */
enum H2mStatus h2m_annuitize(double capex, double lifetime, double rate, double *out);

/**
 * Certificate cost in $/kg for `consumption` MWh/t, certificate `share`
 * and `price` $/MWh.
 */
double h2m_eac_cost(double consumption, double share, double price);

/**
 * Loads a case file (TOML, or JSON by extension) with its CSV series.
 *
 * # Safety
 * `path` must be null or a NUL-terminated string; `out` must be null or
 * writable. On success `*out` owns a case to release with [`h2m_case_free`].
 */
enum H2mStatus h2m_case_load(const char *path, struct H2mCase **out);

/**
 * Builds a case from its JSON serialization, series inline.
 *
 * # Safety
 * As for [`h2m_case_load`].
 */
enum H2mStatus h2m_case_from_json(const char *json, struct H2mCase **out);

/**
 * Releases a case; null is ignored.
 *
 * # Safety
 * `case` must come from this library and not be used afterwards.
 */
void h2m_case_free(struct H2mCase *case_);

/**
 * Writes the number of modeled hours and scenarios.
 *
 * # Safety
 * `case` must be a live handle or null; outputs must be null or writable.
 */
enum H2mStatus h2m_case_dimensions(const struct H2mCase *case_, size_t *hours, size_t *scenarios);

/**
 * Checks the case. Writes the violation count to `count`; returns
 * `H2M_STATUS_INVALID_INPUT` with every violation in the last error when
 * the count is nonzero.
 *
 * # Safety
 * `case` must be a live handle or null; `count` must be null or writable.
 */
enum H2mStatus h2m_case_validate(const struct H2mCase *case_, size_t *count);

/**
 * Builds and solves the case with the embedded solver, then computes its
 * report. `mode` is one of the `H2M_MODE_*` constants.
 *
 * # Safety
 * `case` must be a live handle or null; `out` must be null or writable.
 * On success `*out` owns a report to release with [`h2m_report_free`].
 */
enum H2mStatus h2m_case_solve(const struct H2mCase *case_, int32_t mode, struct H2mReport **out);

/**
 * Releases a report; null is ignored.
 *
 * # Safety
 * `report` must come from this library and not be used afterwards.
 */
void h2m_report_free(struct H2mReport *report);

/**
 * Optimal objective, $/yr.
 *
 * # Safety
 * `report` must be a live handle or null; `out` must be null or writable.
 */
enum H2mStatus h2m_report_objective(const struct H2mReport *report, double *out);

/**
 * System emissions, tCO2/yr.
 *
 * # Safety
 * As for [`h2m_report_objective`].
 */
enum H2mStatus h2m_report_emissions(const struct H2mReport *report, double *out);

/**
 * Levelized cost of hydrogen, $/kg; `H2M_STATUS_NOT_AVAILABLE` when the
 * case produces no hydrogen.
 *
 * # Safety
 * As for [`h2m_report_objective`].
 */
enum H2mStatus h2m_report_lcoh(const struct H2mReport *report, double *out);

/**
 * Installed MW of technology `id`.
 *
 * # Safety
 * `report` must be a live handle or null; `id` null or NUL-terminated;
 * `out` null or writable.
 */
enum H2mStatus h2m_report_capacity(const struct H2mReport *report, const char *id, double *out);

/**
 * The full report as JSON. `*out` owns a string to release with
 * [`h2m_string_free`].
 *
 * # Safety
 * `report` must be a live handle or null; `out` null or writable.
 */
enum H2mStatus h2m_report_json(const struct H2mReport *report, char **out);

/**
 * Releases a string returned by this library; null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void h2m_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* H2MATCH_H */
