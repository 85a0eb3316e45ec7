#ifndef BALLBESOV_H
#define BALLBESOV_H

/* Generated by cbindgen; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every API function.
 */
typedef enum {
  BB_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  BB_STATUS_NULL_ARGUMENT = 1,
  /**
   * Malformed JSON or an unknown name.
   */
  BB_STATUS_PARSE = 2,
  /**
   * Dimension mismatch between arguments.
   */
  BB_STATUS_DIMENSION = 3,
  /**
   * A numerical precondition was violated (divergent integral, |z| too
   * close to the boundary, truncation too small, non-finite value).
   */
  BB_STATUS_PRECONDITION = 4,
  /**
   * Invalid parameter value.
   */
  BB_STATUS_INVALID = 5,
  /**
   * Filesystem error.
   */
  BB_STATUS_IO = 6,
  /**
   * Argument was not valid UTF-8.
   */
  BB_STATUS_UTF8 = 7,
  /**
   * An internal panic was caught.
   */
  BB_STATUS_PANIC = 8,
} bb_status;

/**
 * Opaque truncated holomorphic series handle.
 */
typedef struct bb_series bb_series;

/**
 * Opaque weight handle.
 */
typedef struct bb_weight bb_weight;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread. The pointer stays
 * valid until the next failing call on the same thread; do not free it.
 */
const char *bb_last_error_message(void);

/**
 * Releases a string returned through a `char**` out-parameter.
 *
 * # Safety
 * `s` must have been produced by this library and not freed before.
 */
void bb_string_free(char *s);

/**
 * Parses a series from its JSON document.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be a valid pointer.
 */
bb_status bb_series_from_json(const char *json, bb_series **out);

/**
 * Serializes a series to its JSON document.
 *
 * # Safety
 * `series` must be a live handle; `out_json` must be a valid pointer.
 */
bb_status bb_series_to_json(const bb_series *series, char **out_json);

/**
 * # Safety
 * `series` must be a live handle or null.
 */
void bb_series_free(bb_series *series);

/**
 * # Safety
 * `series` must be a live handle; `out` must be valid.
 */
bb_status bb_series_dim(const bb_series *series, uintptr_t *out);

/**
 * # Safety
 * `series` must be a live handle; `out` must be valid.
 */
bb_status bb_series_max_degree(const bb_series *series, uint32_t *out);

/**
 * Evaluates the series at a point given as `dim` interleaved (re, im)
 * pairs; the point must lie in the open unit ball.
 *
 * # Safety
 * `series` must be a live handle; `coords` must point at `2 dim` doubles;
 * `out_re`, `out_im` must be valid.
 */
bb_status bb_series_evaluate(const bb_series *series,
                             const double *coords,
                             uintptr_t dim,
                             double *out_re,
                             double *out_im);

/**
 * Coefficient-convolution product truncated to `max_degree`.
 *
 * # Safety
 * `a`, `b` must be live handles; `out` must be valid.
 */
bb_status bb_series_multiply(const bb_series *a,
                             const bb_series *b,
                             uint32_t max_degree,
                             bb_series **out);

/**
 * D^alpha: scales the degree-k block by (k+1)^alpha.
 *
 * # Safety
 * `series` must be a live handle; `out` must be valid.
 */
bb_status bb_series_frac_derivative(const bb_series *series, double alpha, bb_series **out);

/**
 * R: scales the degree-k block by k.
 *
 * # Safety
 * `series` must be a live handle; `out` must be valid.
 */
bb_status bb_series_radial_derivative(const bb_series *series, bb_series **out);

/**
 * Truncation of (1 - <xi, tau>)^{-s} to degree `max_degree`; `tau` is given
 * as interleaved pairs and must lie in the open ball.
 *
 * # Safety
 * `tau` must point at `2 dim` doubles; `out` must be valid.
 */
bb_status bb_kernel_series(const double *tau,
                           uintptr_t dim,
                           double s,
                           uint32_t max_degree,
                           bb_series **out);

/**
 * Parses a weight from its JSON document.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be valid.
 */
bb_status bb_weight_from_json(const char *json, bb_weight **out);

/**
 * omega(x) for x in (0, 1].
 *
 * # Safety
 * `weight` must be a live handle; `out` must be valid.
 */
bb_status bb_weight_eval(const bb_weight *weight, double x, double *out);

/**
 * # Safety
 * `weight` must be a live handle or null.
 */
void bb_weight_free(bb_weight *weight);

/**
 * Besov norm of `series` with the given parameters; the full result
 * (value, provenance, convergence flag) is returned as a JSON document.
 * `unchecked` nonzero computes divergent parameter sets anyway and flags
 * them.
 *
 * # Safety
 * `series` and `weight` must be live handles; `out_json` must be valid.
 */
bb_status bb_besov_norm(const bb_series *series,
                        double p,
                        const bb_weight *weight,
                        uint32_t levels,
                        uint32_t points,
                        uint32_t sphere_degree,
                        int32_t unchecked,
                        char **out_json);

/**
 * Exact action of the integral operator with symbol `h` and the given
 * truncations on `f`.
 *
 * # Safety
 * `h` and `f` must be live handles; `out` must be valid.
 */
bb_status bb_apply_t_exact(const bb_series *h,
                           double alpha,
                           uint32_t kernel_truncation,
                           uint32_t output_truncation,
                           const bb_series *f,
                           bb_series **out);

/**
 * The multiplier h f truncated to `max_degree`.
 *
 * # Safety
 * `h` and `f` must be live handles; `out` must be valid.
 */
bb_status bb_apply_m(const bb_series *h, const bb_series *f, uint32_t max_degree, bb_series **out);

/**
 * Runs one validation check (or "all") against a manifest JSON (null for
 * the shipped default). The reports are returned as a JSON array;
 * `out_pass` is 1 when every gated check passed.
 *
 * # Safety
 * `check_id` must be a NUL-terminated string; `manifest_json` may be null;
 * `out_json` and `out_pass` must be valid.
 */
bb_status bb_validate(const char *check_id,
                      const char *manifest_json,
                      char **out_json,
                      int32_t *out_pass);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* BALLBESOV_H */
