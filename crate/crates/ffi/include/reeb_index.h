#ifndef REEB_INDEX_H
#define REEB_INDEX_H

#pragma once

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes; one per library error plus the ABI's own failures.
 */
typedef enum {
  REEB_STATUS_OK = 0,
  REEB_STATUS_NULL_ARGUMENT = 1,
  REEB_STATUS_INVALID_UTF8 = 2,
  REEB_STATUS_PANIC = 3,
  REEB_STATUS_UNKNOWN_DEGREE = 4,
  REEB_STATUS_BUFFER_TOO_SMALL = 5,
  REEB_STATUS_PARSE_ERROR = 10,
  REEB_STATUS_NON_SYMMETRIC_GENERATOR = 20,
  REEB_STATUS_INVALID_PATH = 21,
  REEB_STATUS_INTEGRATION_DIVERGENCE = 22,
  REEB_STATUS_EIGEN_SOLVER_FAILURE = 23,
  REEB_STATUS_DEGENERATE_ENDPOINT = 24,
  REEB_STATUS_CROSSING_RESOLUTION_FAILURE = 25,
  REEB_STATUS_ENGINE_DISAGREEMENT = 26,
  REEB_STATUS_EPSILON_SELECTION_FAILURE = 27,
  REEB_STATUS_CONTINUATION_AMBIGUITY = 28,
  REEB_STATUS_GAP_TOO_SMALL = 29,
  REEB_STATUS_PRECONDITION_VIOLATED = 30,
  REEB_STATUS_CERTIFICATE_VIOLATION = 31,
  REEB_STATUS_NOT_STRICTLY_CONVEX = 40,
  REEB_STATUS_EMPTY_INTERIOR = 41,
  REEB_STATUS_NON_PRIMITIVE_NORMAL = 42,
  REEB_STATUS_REDUNDANT_NORMAL = 43,
  REEB_STATUS_FACE_FACET_COUNT_MISMATCH = 44,
  REEB_STATUS_NOT_INTEGRAL_BASIS_COMPLETABLE = 45,
  REEB_STATUS_NOT_IN_INTERIOR_DUAL_CONE = 46,
  REEB_STATUS_DEGENERATE_EDGE_BASIS = 47,
  REEB_STATUS_DEGENERATE_REEB_VECTOR = 48,
  REEB_STATUS_CUTOFF_TOO_SMALL = 49,
  REEB_STATUS_PERTURBATION_FAILURE = 50,
  REEB_STATUS_NOT_IN_SUBGROUP_K = 51,
  REEB_STATUS_OVERFLOW = 52,
  REEB_STATUS_MORSE_INDEX_OUT_OF_RANGE = 60,
  REEB_STATUS_HYPOTHESES_NOT_MET = 61,
  REEB_STATUS_PINCHING_VIOLATED = 62,
} ReebStatus;

/**
 * Opaque moment cone.
 */
typedef struct ReebCone ReebCone;

/**
 * Opaque contact homology table.
 */
typedef struct ReebHcTable ReebHcTable;

/**
 * Opaque symplectic path.
 */
typedef struct ReebPath ReebPath;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread, or NULL. Owned by the
 * library; valid until the next failing call on the same thread.
 */
const char *reeb_last_error_message(void);

/**
 * Frees a string returned by this library.
 *
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void reeb_string_free(char *s);

/**
 * Parses `{"dim": n+1, "normals": [[int]]}`.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` a valid pointer.
 */
ReebStatus reeb_cone_from_json(const char *json, ReebCone **out);

/**
 * # Safety
 * `cone` must come from `reeb_cone_from_json` and not be freed twice.
 */
void reeb_cone_free(ReebCone *cone);

/**
 * Ok when the cone is good, otherwise the status of the first violation.
 *
 * # Safety
 * `cone` must be a valid handle.
 */
ReebStatus reeb_cone_check(const ReebCone *cone);

/**
 * Writes the invariant factors of π₁ into `factors` (capacity `cap`) and
 * their count into `len`; an empty list means the group is trivial.
 *
 * # Safety
 * `factors` must hold `cap` elements; `len` must be valid.
 */
ReebStatus reeb_cone_pi1(const ReebCone *cone, int64_t *factors, uintptr_t cap, uintptr_t *len);

/**
 * Contact homology ranks up to `cutoff` for the seeded perturbation of Σν_j.
 *
 * # Safety
 * `cone` must be a valid handle and `out` a valid pointer.
 */
ReebStatus reeb_hc_table_auto(const ReebCone *cone,
                              uint64_t seed,
                              int64_t cutoff,
                              ReebHcTable **out);

/**
 * # Safety
 * `table` must come from this library and not be freed twice.
 */
void reeb_hc_table_free(ReebHcTable *table);

/**
 * Rank in `degree`; `UnknownDegree` above the cutoff.
 *
 * # Safety
 * `table` must be a valid handle and `rank` a valid pointer.
 */
ReebStatus reeb_hc_table_rank(const ReebHcTable *table, int64_t degree, uint64_t *rank);

/**
 * Lowest degree with non-zero rank.
 *
 * # Safety
 * `table` must be a valid handle and `k_minus` a valid pointer.
 */
ReebStatus reeb_hc_table_k_minus(const ReebHcTable *table, int64_t *k_minus);

/**
 * JSON form of the table; free with `reeb_string_free`.
 *
 * # Safety
 * `table` must be a valid handle and `out` a valid pointer.
 */
ReebStatus reeb_hc_table_to_json(const ReebHcTable *table, char **out);

/**
 * Parses `{"n": int, "samples": [{"t": float, "A": [[float]]}]}`.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` a valid pointer.
 */
ReebStatus reeb_path_from_json(const char *json, ReebPath **out);

/**
 * # Safety
 * `path` must come from this library and not be freed twice.
 */
void reeb_path_free(ReebPath *path);

/**
 * Lower Conley–Zehnder index μ⁻.
 *
 * # Safety
 * `path` must be a valid handle and `out` a valid pointer.
 */
ReebStatus reeb_path_cz_minus(const ReebPath *path, int64_t *out);

/**
 * Upper Conley–Zehnder index μ⁺.
 *
 * # Safety
 * `path` must be a valid handle and `out` a valid pointer.
 */
ReebStatus reeb_path_cz_plus(const ReebPath *path, int64_t *out);

/**
 * Twice the Robbin–Salamon index (it is a half-integer).
 *
 * # Safety
 * `path` must be a valid handle and `out` a valid pointer.
 */
ReebStatus reeb_path_rs_index_twice(const ReebPath *path, int64_t *out);

/**
 * Bott function at e^{iθ}.
 *
 * # Safety
 * `path` must be a valid handle and `out` a valid pointer.
 */
ReebStatus reeb_path_bott_value(const ReebPath *path, double theta, int64_t *out);

/**
 * Ellipticity certificate for iterate `j` as JSON; free with
 * `reeb_string_free`.
 *
 * # Safety
 * `path` must be a valid handle and `out` a valid pointer.
 */
ReebStatus reeb_path_elliptic_certificate(const ReebPath *path, uintptr_t j, char **out);

/**
 * μ⁻_CZ of the linearized flow of |x|²/2R² on R^{2n+2} over time S.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
ReebStatus reeb_ind_hr(uintptr_t n, double s, double r, int64_t *out);

/**
 * Stable machine-readable name of a status code, or NULL for an unknown
 * code.
 */
const char *reeb_status_name(int32_t code);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* REEB_INDEX_H */
