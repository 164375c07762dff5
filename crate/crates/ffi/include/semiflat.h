#ifndef SEMIFLAT_H
#define SEMIFLAT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes. Values from 10 on are the library error classes in the
 * order of `Error::CODES`.
 */
typedef enum SfStatus {
  SF_STATUS_OK = 0,
  SF_STATUS_NULL_POINTER = 1,
  SF_STATUS_INVALID_UTF8 = 2,
  SF_STATUS_PANIC = 3,
  SF_STATUS_PARSE_ERROR = 10,
  SF_STATUS_UNGLUED_SLOT = 11,
  SF_STATUS_TRIANGLE_INEQ = 12,
  SF_STATUS_GLUING_MISMATCH = 13,
  SF_STATUS_DISCONNECTED = 14,
  SF_STATUS_BAD_CONE_ANGLE = 15,
  SF_STATUS_GAUSS_BONNET_VIOLATION = 16,
  SF_STATUS_COMPLEXITY_TOO_LOW = 17,
  SF_STATUS_TRIVIAL_HOLONOMY_INPUT = 18,
  SF_STATUS_INESSENTIAL_CURVE = 19,
  SF_STATUS_NONCONVERGENT = 20,
  SF_STATUS_BUDGET_EXCEEDED = 21,
  SF_STATUS_RANK_DEFECT = 22,
  SF_STATUS_COMBINATORICS_MISMATCH = 23,
  SF_STATUS_DEGENERATE_TRIANGLE = 24,
  SF_STATUS_ZERO_FIRST_COORDINATE = 25,
  SF_STATUS_SINGULAR_SYSTEM = 26,
  SF_STATUS_DEGENERATE_INPUT = 27,
  SF_STATUS_NOT_FOUND_WITHIN_BUDGET = 28,
  SF_STATUS_CONSTRUCTION_FAILED = 29,
  SF_STATUS_ANGLE_VIOLATION = 30,
  SF_STATUS_UNSTABLE_POINT = 31,
  SF_STATUS_NULLITY_ZERO = 32,
  SF_STATUS_STABILITY_WALL = 33,
  SF_STATUS_INVALID_CURVE = 34,
  SF_STATUS_INVALID_ARGUMENT = 35,
  SF_STATUS_CHECK_FAILED = 36,
  SF_STATUS_IO_ERROR = 37,
} SfStatus;

/**
 * A parsed surface together with the curves of its file.
 */
typedef struct SfSurface SfSurface;

typedef struct SfInfo {
  int64_t genus;
  /**
   * Marked points (poles and regular marked points).
   */
  uintptr_t n;
  /**
   * Zeros plus marked points.
   */
  uintptr_t k;
  int32_t holonomy;
  /**
   * Real dimension of the stratum.
   */
  int64_t dim_stratum;
  /**
   * Real dimension of the unit-area slice modulo rotation.
   */
  int64_t dim_slice;
  uintptr_t triangles;
  uintptr_t edges;
  uintptr_t curves;
  double area;
} SfInfo;

typedef struct SfRigidity {
  uintptr_t edge_count;
  int64_t expected_edges;
  uintptr_t sigma_size;
  int64_t sigma_bound;
  uintptr_t rank;
  int64_t expected_rank;
  double radius;
  double max_residual;
} SfRigidity;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *sf_version(void);

/**
 * Message of the last failure on this thread, or NULL. Valid until the
 * next failing call on the same thread.
 */
const char *sf_last_error_message(void);

/**
 * # Safety
 * `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum SfStatus sf_surface_parse(const char *text, struct SfSurface **out);

/**
 * # Safety
 * `s` must come from [`sf_surface_parse`] and not have been freed; NULL is
 * ignored.
 */
void sf_surface_free(struct SfSurface *s);

/**
 * # Safety
 * `s` must be a live handle and `out` a valid pointer.
 */
enum SfStatus sf_surface_info(const struct SfSurface *s, struct SfInfo *out);

/**
 * Surface and curves in the text format; release with [`sf_string_free`].
 *
 * # Safety
 * `s` must be a live handle and `out` a valid pointer.
 */
enum SfStatus sf_surface_serialize(const struct SfSurface *s, char **out);

/**
 * # Safety
 * `p` must come from this library and not have been freed; NULL is
 * ignored.
 */
void sf_string_free(char *p);

/**
 * Length of the geodesic representative of the named curve.
 *
 * # Safety
 * `s` must be a live handle, `name` NUL-terminated and `out` valid.
 */
enum SfStatus sf_curve_length(const struct SfSurface *s, const char *name, double *out);

/**
 * Relative residual of length = ½∫ i(ν(θ), c) dθ; `quadrature` selects
 * numerical integration instead of the exact piecewise formula.
 *
 * # Safety
 * `s` must be a live handle, `name` NUL-terminated and `out` valid.
 */
enum SfStatus sf_length_formula_residual(const struct SfSurface *s,
                                         const char *name,
                                         bool quadrature,
                                         double *out);

/**
 * Number of unoriented saddle connections of length at most `max_length`.
 *
 * # Safety
 * `s` must be a live handle and `out` valid.
 */
enum SfStatus sf_saddle_count(const struct SfSurface *s, double max_length, uintptr_t *out);

/**
 * Triangulates, builds the edge-length certificates and reports counts and
 * the rank of their length spectrum.
 *
 * # Safety
 * `s` must be a live handle and `out` valid.
 */
enum SfStatus sf_rigidity_certify(const struct SfSurface *s, struct SfRigidity *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SEMIFLAT_H */
