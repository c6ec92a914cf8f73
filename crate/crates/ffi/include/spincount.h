#ifndef SPINCOUNT_H
#define SPINCOUNT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SpcStatus {
  SPC_STATUS_OK = 0,
  /**
   * Null pointer, invalid UTF-8 or a bad parameter.
   */
  SPC_STATUS_INVALID_ARGUMENT = 1,
  SPC_STATUS_PARSE = 2,
  SPC_STATUS_PRECONDITION = 3,
  SPC_STATUS_CAPACITY = 4,
  /**
   * An internal consistency check failed.
   */
  SPC_STATUS_VERIFICATION = 5,
  SPC_STATUS_PANIC = 6,
} SpcStatus;

/**
 * A nonnegative pseudo-Boolean function.
 */
typedef struct SpcFunction SpcFunction;

/**
 * A weighted CSP instance.
 */
typedef struct SpcInstance SpcInstance;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. Valid until the next failing call.
 */
const char *spc_last_error(void);

/**
 * Static, nul-terminated crate version.
 */
const char *spc_version(void);

/**
 * Releases a string returned by this library; null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void spc_string_free(char *s);

/**
 * Parses a literal `"<arity> <v0> <v1> .."`.
 *
 * # Safety
 * `literal` must be a nul-terminated string; `out` must be writable.
 */
enum SpcStatus spc_function_parse(const char *literal, struct SpcFunction **out);

/**
 * # Safety
 * `f` must come from [`spc_function_parse`] and not be freed twice; null is ignored.
 */
void spc_function_free(struct SpcFunction *f);

/**
 * Arity of `f`, or `usize::MAX` for null.
 *
 * # Safety
 * `f` must be null or a live handle.
 */
size_t spc_function_arity(const struct SpcFunction *f);

/**
 * Literal form of `f`.
 *
 * # Safety
 * `f` must be a live handle; `out` must be writable.
 */
enum SpcStatus spc_function_to_string(const struct SpcFunction *f, char **out);

/**
 * Fourier coefficients as a signed literal.
 *
 * # Safety
 * `f` must be a live handle; `out` must be writable.
 */
enum SpcStatus spc_fourier(const struct SpcFunction *f, char **out);

/**
 * Two-spin verdict tag of a binary function, e.g. `"FPRAS"`.
 *
 * # Safety
 * `f` must be a live handle; `out` must be writable.
 */
enum SpcStatus spc_classify_two_spin(const struct SpcFunction *f, char **out);

/**
 * Parses an instance in the `fun` / `var` / `con` text format.
 *
 * # Safety
 * `source` must be a nul-terminated string; `out` must be writable.
 */
enum SpcStatus spc_instance_parse(const char *source, struct SpcInstance **out);

/**
 * # Safety
 * `inst` must come from [`spc_instance_parse`] and not be freed twice; null is ignored.
 */
void spc_instance_free(struct SpcInstance *inst);

/**
 * Number of variables, or `usize::MAX` for null.
 *
 * # Safety
 * `inst` must be null or a live handle.
 */
size_t spc_instance_num_vars(const struct SpcInstance *inst);

/**
 * Canonical text form of `inst`.
 *
 * # Safety
 * `inst` must be a live handle; `out` must be writable.
 */
enum SpcStatus spc_instance_to_string(const struct SpcInstance *inst, char **out);

/**
 * Exact partition function by enumeration; `max_vars = 0` uses the default limit.
 *
 * # Safety
 * `inst` must be a live handle; `out` must be writable.
 */
enum SpcStatus spc_z_exact(const struct SpcInstance *inst, size_t max_vars, char **out);

/**
 * Partition function of an instance over one binary function with
 * nonnegative spectrum, through the perfect matching estimator. `epsilon` is
 * a rational string (null for the default); graphs with at most `exact_cap`
 * vertices are counted exactly, and then `*exact` is set to 1.
 *
 * # Safety
 * `inst` must be a live handle; `epsilon` null or nul-terminated; `out` writable; `exact` null or writable.
 */
enum SpcStatus spc_z_estimate(const struct SpcInstance *inst,
                              const char *epsilon,
                              uint64_t seed,
                              size_t exact_cap,
                              char **out,
                              int32_t *exact);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SPINCOUNT_H */
