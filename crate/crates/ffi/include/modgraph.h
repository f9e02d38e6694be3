#ifndef MODGRAPH_H
#define MODGRAPH_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call. The nonzero codes below 6 agree with the
 * exit codes of the command-line tool.
 */
typedef enum MgStatus {
  MG_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  MG_STATUS_NULL_POINTER = 1,
  /**
   * Malformed input: bad UTF-8, JSON, names or options.
   */
  MG_STATUS_INVALID_ARGUMENT = 2,
  /**
   * The requested rank and leg count have no reduced graphs.
   */
  MG_STATUS_EXCLUDED_CASE = 3,
  /**
   * An operad failed the cyclic operad identities.
   */
  MG_STATUS_AXIOM_VIOLATION = 4,
  MG_STATUS_INTERNAL = 5,
  /**
   * A panic was caught at the boundary.
   */
  MG_STATUS_PANIC = 6,
} MgStatus;

/**
 * A census of reduced graphs.
 */
typedef struct MgCensus MgCensus;

/**
 * A graph complex with its differentials.
 */
typedef struct MgComplex MgComplex;

/**
 * A cyclic operad: a preset or a loaded table.
 */
typedef struct MgOperad MgOperad;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null after a success.
 * The pointer stays valid until the next call into the library.
 */
const char *mg_last_error(void);

/**
 * Library version as a static string.
 */
const char *mg_version(void);

/**
 * Releases a string returned by the library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void mg_string_free(char *s);

/**
 * Enumerates reduced graphs of rank `rank` with the given leg labels.
 * `kind` is `"plain"`, `"ribbon"` or `"mobius"`. `labels` may be null when
 * `n_labels` is zero.
 *
 * # Safety
 * `kind` must be a NUL-terminated string, `labels` must point to `n_labels`
 * such strings, and `out` must be writable.
 */
enum MgStatus mg_census_new(const char *kind,
                            uint32_t rank,
                            const char *const *labels,
                            size_t n_labels,
                            struct MgCensus **out);

/**
 * Number of isomorphism classes.
 *
 * # Safety
 * `census` must be a live handle and `out` writable.
 */
enum MgStatus mg_census_len(const struct MgCensus *census, size_t *out);

/**
 * The census as a JSON document.
 *
 * # Safety
 * `census` must be a live handle and `out` writable.
 */
enum MgStatus mg_census_to_json(const struct MgCensus *census, char **out);

/**
 * # Safety
 * `census` must be null or a live handle, which this call consumes.
 */
void mg_census_free(struct MgCensus *census);

/**
 * One of the presets `"comm"`, `"ass"`, `"invass"`.
 *
 * # Safety
 * `name` must be a NUL-terminated string and `out` writable.
 */
enum MgStatus mg_operad_preset(const char *name, struct MgOperad **out);

/**
 * Loads an operad table document and verifies its axioms. `options` holds
 * load options as JSON and may be null for none.
 *
 * # Safety
 * `json` and, when non-null, `options` must be NUL-terminated strings;
 * `out` must be writable.
 */
enum MgStatus mg_operad_from_json(const char *json, const char *options, struct MgOperad **out);

/**
 * Checks the cyclic operad identities exhaustively up to `max_arity` and
 * writes the report as JSON. Violations are reported through the JSON and
 * `clean`, not the status.
 *
 * # Safety
 * `op` must be a live handle; `clean` and `report` must be writable.
 */
enum MgStatus mg_operad_check_axioms(const struct MgOperad *op,
                                     uint32_t max_arity,
                                     bool *clean,
                                     char **report);

/**
 * # Safety
 * `op` must be null or a live handle, which this call consumes.
 */
void mg_operad_free(struct MgOperad *op);

/**
 * Builds the graph complex of `op` on a plain census.
 *
 * # Safety
 * `op` and `census` must be live handles and `out` writable.
 */
enum MgStatus mg_complex_build(const struct MgOperad *op,
                               const struct MgCensus *census,
                               struct MgComplex **out);

/**
 * Dimensions, Betti numbers and Euler characteristic as JSON.
 *
 * # Safety
 * `complex` must be a live handle and `out` writable.
 */
enum MgStatus mg_complex_summary(const struct MgComplex *complex, char **out);

/**
 * Whether every composite of consecutive differentials vanishes.
 *
 * # Safety
 * `complex` must be a live handle and `out` writable.
 */
enum MgStatus mg_complex_d_squared_vanishes(const struct MgComplex *complex, bool *out);

/**
 * Betti number in `degree`; zero outside the support.
 *
 * # Safety
 * `complex` must be a live handle and `out` writable.
 */
enum MgStatus mg_complex_betti(const struct MgComplex *complex, int64_t degree, size_t *out);

/**
 * # Safety
 * `complex` must be null or a live handle, which this call consumes.
 */
void mg_complex_free(struct MgComplex *complex);

/**
 * Connected components of the modular envelope of a preset over a plain
 * census, as JSON.
 *
 * # Safety
 * `op` and `census` must be live handles and `out` writable.
 */
enum MgStatus mg_pi0(const struct MgOperad *op, const struct MgCensus *census, char **out);

/**
 * Surface invariant of a ribbon or Möbius graph given as JSON.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` writable.
 */
enum MgStatus mg_thicken(const char *json, char **out);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* MODGRAPH_H */
