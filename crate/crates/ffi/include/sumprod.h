#ifndef SUMPROD_H
#define SUMPROD_H

/* Generated by cbindgen; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes returned by every fallible entry point.
typedef enum SumprodStatus {
  SUMPROD_STATUS_OK = 0,
  // A required pointer argument was NULL.
  SUMPROD_STATUS_NULL_POINTER = 1,
  // A string argument was not valid UTF-8.
  SUMPROD_STATUS_INVALID_UTF8 = 2,
  // Input text could not be parsed.
  SUMPROD_STATUS_PARSE_ERROR = 3,
  // Parameters violate a precondition.
  SUMPROD_STATUS_BAD_PARAMS = 4,
  // The operation requires `0 ∉ A`.
  SUMPROD_STATUS_ZERO_ELEMENT = 5,
  // The set fails the sector condition.
  SUMPROD_STATUS_SECTOR_VIOLATION = 6,
  // The requested verification ran and found a violation.
  SUMPROD_STATUS_CHECK_FAILED = 7,
  // Any other error; see `sumprod_last_error_message`.
  SUMPROD_STATUS_INTERNAL_ERROR = 8,
} SumprodStatus;

// The four element-wise set operations.
typedef enum SumprodSetOp {
  SUMPROD_SET_OP_SUM = 0,
  SUMPROD_SET_OP_DIFF = 1,
  SUMPROD_SET_OP_PROD = 2,
  SUMPROD_SET_OP_RATIO = 3,
} SumprodSetOp;

// Energy selector for [`sumprod_energy_json`].
typedef enum SumprodEnergyKind {
  SUMPROD_ENERGY_KIND_ADDITIVE = 0,
  SUMPROD_ENERGY_KIND_MULTIPLICATIVE = 1,
  SUMPROD_ENERGY_KIND_CUBIC = 2,
} SumprodEnergyKind;

// Opaque handle to a finite complex set.
typedef struct SumprodSet SumprodSet;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Returns the most recent error message for this thread, or NULL when no
// error has occurred. The caller owns the string.
char *sumprod_last_error_message(void);

// Releases a string returned by this library.
//
// # Safety
// `s` must be NULL or a pointer returned by a `sumprod_*` function and not
// already freed.
void sumprod_string_free(char *s);

// Parses set-file text (`re im` per line, `#` comments) into a handle.
//
// # Safety
// `text` must be a valid NUL-terminated string; `out` a valid pointer.
enum SumprodStatus sumprod_set_parse(const char *text, struct SumprodSet **out);

// Generates a set from a spec string: `ap:start,step,n`, `gp:start,ratio,n`,
// `lattice:w,h`, `random:n`, or `sector:n`; `eps` is a rational like `1/100`.
//
// # Safety
// `spec` and `eps` must be valid NUL-terminated strings; `out` valid.
enum SumprodStatus sumprod_set_generate(const char *spec,
                                        uint64_t seed,
                                        const char *eps,
                                        struct SumprodSet **out);

// Number of elements; 0 for a NULL handle.
//
// # Safety
// `set` must be NULL or a live handle.
size_t sumprod_set_len(const struct SumprodSet *set);

// Renders a set in the set file format.
//
// # Safety
// `set` must be a live handle; `out` a valid pointer.
enum SumprodStatus sumprod_set_render(const struct SumprodSet *set, char **out);

// Releases a set handle.
//
// # Safety
// `set` must be NULL or a handle returned by a constructor, not yet freed.
void sumprod_set_free(struct SumprodSet *set);

// Element-wise binary set operation; the result is a new handle.
//
// # Safety
// `a` and `b` must be live handles; `out` a valid pointer.
enum SumprodStatus sumprod_set_combine(enum SumprodSetOp op,
                                       const struct SumprodSet *a,
                                       const struct SumprodSet *b,
                                       struct SumprodSet **out);

// Exact sector membership test; writes 1 or 0 to `out`.
//
// # Safety
// `set` must be a live handle; `eps` a valid string; `out` valid.
enum SumprodStatus sumprod_sector_check(const struct SumprodSet *set,
                                        const char *eps,
                                        int32_t *out);

// Sizes, energies and observed exponent ratios as a JSON document.
//
// # Safety
// `set` must be a live handle; `set_id` a valid string; `out` valid.
enum SumprodStatus sumprod_stats_json(const struct SumprodSet *set, const char *set_id, char **out);

// One energy report (value, per-value counts, cited lower bound) as JSON.
//
// # Safety
// `set` must be a live handle; `out` a valid pointer.
enum SumprodStatus sumprod_energy_json(const struct SumprodSet *set,
                                       enum SumprodEnergyKind kind,
                                       char **out);

// Runs the geometric disjointness construction on a sector set and returns
// the full report as JSON. `use_popular` restricts the tree vertices to
// the popular ratio lines. Returns `CheckFailed` when the report records a
// violation (the JSON is still written).
//
// # Safety
// `set` must be a live handle; `eps` a valid string; `out` valid.
enum SumprodStatus sumprod_claim_json(const struct SumprodSet *set,
                                      const char *eps,
                                      int32_t use_popular,
                                      char **out);

// Runs a verification suite (`identities`, `claim`, `incidence`, `all`)
// over a generated family (`kind:n_max`) and returns the textual report.
// `use_popular` switches the construction's tree vertices to the popular
// ratio lines. `artifact_dir` may be NULL; when set, counterexamples are
// persisted there. Returns `CheckFailed` if any exact assertion failed.
//
// # Safety
// String arguments must be valid or NULL as documented; `out` valid.
enum SumprodStatus sumprod_verify_suite(const char *suite,
                                        const char *family,
                                        size_t count,
                                        uint64_t seed,
                                        const char *eps,
                                        int32_t use_popular,
                                        const char *artifact_dir,
                                        char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SUMPROD_H */
