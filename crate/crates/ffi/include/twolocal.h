#ifndef TWOLOCAL_H
#define TWOLOCAL_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Which pairing a Gram matrix is built from.
 */
typedef enum TwolocalPairing {
  TWOLOCAL_PAIRING_DUAL = 0,
  TWOLOCAL_PAIRING_REC = 1,
} TwolocalPairing;

/**
 * Outcome of a call. Library errors map one-to-one onto the error kinds
 * of the Rust API.
 */
typedef enum TwolocalStatus {
  TWOLOCAL_STATUS_OK = 0,
  TWOLOCAL_STATUS_NULL_POINTER = 1,
  TWOLOCAL_STATUS_INVALID_UTF8 = 2,
  TWOLOCAL_STATUS_PANIC = 3,
  TWOLOCAL_STATUS_DIVISION_BY_ZERO = 10,
  TWOLOCAL_STATUS_ZERO_DIVISION = 11,
  TWOLOCAL_STATUS_EMPTY_WINDOW = 12,
  TWOLOCAL_STATUS_UNDETERMINED_VALUATION = 13,
  TWOLOCAL_STATUS_NOT_A_PTH_POWER = 14,
  TWOLOCAL_STATUS_PRECISION_LOSS = 15,
  TWOLOCAL_STATUS_LENGTH_MISMATCH = 16,
  TWOLOCAL_STATUS_TWIST_VIOLATION = 17,
  TWOLOCAL_STATUS_FACTORIZATION_BUDGET_EXCEEDED = 18,
  TWOLOCAL_STATUS_INVALID_CONTEXT = 19,
  TWOLOCAL_STATUS_PARSE = 20,
  /**
   * The command ran but reported failure (nonzero CLI exit).
   */
  TWOLOCAL_STATUS_COMMAND_FAILED = 30,
} TwolocalStatus;

/**
 * Opaque arithmetic context: field, Witt length and precision windows.
 */
typedef struct TwolocalContext TwolocalContext;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Creates a context for `F_{p^e}` and Witt length `m`.
 *
 * # Safety
 * `out` must be a valid pointer; the handle it receives is released with
 * [`twolocal_context_free`].
 */
enum TwolocalStatus twolocal_context_new(uint32_t p,
                                         uint32_t e,
                                         uint32_t m,
                                         struct TwolocalContext **out);

/**
 * Replaces the precision windows (`lo < hi` on both axes).
 *
 * # Safety
 * `ctx` must come from [`twolocal_context_new`].
 */
enum TwolocalStatus twolocal_context_set_windows(struct TwolocalContext *ctx,
                                                 int64_t t_lo,
                                                 int64_t t_hi,
                                                 int64_t pi_lo,
                                                 int64_t pi_hi);

/**
 * # Safety
 * `ctx` must come from [`twolocal_context_new`] or be null.
 */
void twolocal_context_free(struct TwolocalContext *ctx);

/**
 * Conductor of the character given by a Witt vector expression such as
 * `"[pi^-2]"`.
 *
 * # Safety
 * Pointers must be valid; `witt` must be NUL-terminated.
 */
enum TwolocalStatus twolocal_conductor(const struct TwolocalContext *ctx,
                                       const char *witt,
                                       int64_t *out);

/**
 * `Res_K` of a two-form modulo `Omega^2_A`, as an element of `F_p`.
 *
 * # Safety
 * Pointers must be valid; `form` must be NUL-terminated.
 */
enum TwolocalStatus twolocal_res_k(const struct TwolocalContext *ctx,
                                   const char *form,
                                   uint32_t *out);

/**
 * Reciprocity pairing of a length-one Witt vector with a symbol sum.
 *
 * # Safety
 * Pointers must be valid; strings must be NUL-terminated.
 */
enum TwolocalStatus twolocal_rec_pair(const struct TwolocalContext *ctx,
                                      const char *witt,
                                      const char *symbol,
                                      uint32_t *out);

/**
 * Rank over `F_p` of the Gram matrix on the row window
 * `[t_lo, t_hi) x [pi_lo, pi_hi)` against its mirror.
 *
 * # Safety
 * Pointers must be valid.
 */
enum TwolocalStatus twolocal_gram_rank(const struct TwolocalContext *ctx,
                                       enum TwolocalPairing which,
                                       int64_t n,
                                       int64_t t_lo,
                                       int64_t t_hi,
                                       int64_t pi_lo,
                                       int64_t pi_hi,
                                       size_t *out);

/**
 * Weil reciprocity for rational functions in `T`; `out` is 1 when the
 * product of local symbols is trivial.
 *
 * # Safety
 * Pointers must be valid; strings must be NUL-terminated.
 */
enum TwolocalStatus twolocal_weil_check(const struct TwolocalContext *ctx,
                                        const char *f,
                                        const char *g,
                                        int32_t *out);

/**
 * Runs a CLI command given as a JSON request `{"argv": ["verb", ...]}` and
 * returns the command's output in `*response`, even on failure.
 *
 * # Safety
 * Pointers must be valid; `request` must be NUL-terminated. Free the
 * response with [`twolocal_string_free`].
 */
enum TwolocalStatus twolocal_run_json(const char *request, char **response);

/**
 * # Safety
 * `s` must be a string returned by this library, or null.
 */
void twolocal_string_free(char *s);

/**
 * Message for the last failed call on this thread; empty after a success.
 * Valid until the next call on the same thread.
 */
const char *twolocal_last_error(void);

/**
 * Static name of a status code.
 */
const char *twolocal_status_name(enum TwolocalStatus status);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TWOLOCAL_H */
