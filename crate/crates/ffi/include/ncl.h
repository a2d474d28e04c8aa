#ifndef NCL_H
#define NCL_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum NclStatus {
  NCL_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  NCL_STATUS_NULL_POINTER = 1,
  /**
   * An input string was not valid UTF-8.
   */
  NCL_STATUS_INVALID_UTF8 = 2,
  /**
   * The document could not be parsed.
   */
  NCL_STATUS_PARSE = 3,
  /**
   * The document parsed but does not describe a valid realization.
   */
  NCL_STATUS_INVALID_REALIZATION = 4,
  /**
   * The operation does not apply, e.g. minimizing a graph with cycles.
   */
  NCL_STATUS_NOT_APPLICABLE = 5,
  /**
   * An enumeration exceeded its budget.
   */
  NCL_STATUS_BUDGET_EXCEEDED = 6,
  /**
   * An internal error; the library state is unaffected.
   */
  NCL_STATUS_INTERNAL = 7,
} NclStatus;

/**
 * Opaque realization handle.
 */
typedef struct NclRealization NclRealization;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null if the last
 * call succeeded. Valid until the next call into this library.
 */
const char *ncl_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *ncl_version(void);

/**
 * Parses a JSON realization document.
 *
 * # Safety
 * `json` must be null or a NUL-terminated string; `out` must be null or
 * writable.
 */
enum NclStatus ncl_realization_from_json(const char *json, struct NclRealization **out);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `r` must be null or a handle from this library not yet freed.
 */
void ncl_realization_free(struct NclRealization *r);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must be null or a string from this library not yet freed.
 */
void ncl_string_free(char *s);

/**
 * Canonical JSON document of the realization.
 *
 * # Safety
 * `r` must be a live handle; `out` must be writable.
 */
enum NclStatus ncl_realization_to_json(const struct NclRealization *r, char **out);

/**
 * Full analysis report as JSON.
 *
 * # Safety
 * `r` must be a live handle; `out` must be writable.
 */
enum NclStatus ncl_analyze_json(const struct NclRealization *r, char **out);

/**
 * New handle holding the dual realization.
 *
 * # Safety
 * `r` must be a live handle; `out` must be writable.
 */
enum NclStatus ncl_realization_dualize(const struct NclRealization *r, struct NclRealization **out);

/**
 * # Safety
 * `r` must be a live handle; `out` must be writable.
 */
enum NclStatus ncl_behavior_dim(const struct NclRealization *r, size_t *out);

/**
 * # Safety
 * `r` must be a live handle; `out` must be writable.
 */
enum NclStatus ncl_realized_code_dim(const struct NclRealization *r, size_t *out);

/**
 * # Safety
 * `r` must be a live handle; `out` must be writable.
 */
enum NclStatus ncl_is_observable(const struct NclRealization *r, bool *out);

/**
 * dim B + dim S − Σ dim C_i; zero exactly when controllable.
 *
 * # Safety
 * `r` must be a live handle; `out` must be writable.
 */
enum NclStatus ncl_controllability_defect(const struct NclRealization *r, size_t *out);

/**
 * Minimal realization of a cycle-free realization; `NotApplicable` on
 * graphs with cycles.
 *
 * # Safety
 * `r` must be a live handle; `out` must be writable.
 */
enum NclStatus ncl_minimize(const struct NclRealization *r, struct NclRealization **out);

/**
 * Trim, proper, observable and controllable reduction of any realization.
 *
 * # Safety
 * `r` must be a live handle; `out` must be writable.
 */
enum NclStatus ncl_reduce(const struct NclRealization *r, struct NclRealization **out);

/**
 * Number of trajectory-graph components. `budget` caps every enumerated
 * projection; 0 selects the default (or `NCL_BUDGET`).
 *
 * # Safety
 * `r` must be a live handle; `out` must be writable.
 */
enum NclStatus ncl_trajectory_components(const struct NclRealization *r,
                                         uint64_t budget,
                                         size_t *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* NCL_H */
