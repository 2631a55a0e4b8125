#ifndef HSZE_H
#define HSZE_H

#include <stdint.h>

/**
 * Result codes shared by every entry point.
 */
typedef enum HszeStatus {
  HSZE_STATUS_OK = 0,
  HSZE_STATUS_NULL_POINTER = 1,
  HSZE_STATUS_INVALID_ARGUMENT = 2,
  HSZE_STATUS_PARSE_ERROR = 3,
  HSZE_STATUS_INADMISSIBLE = 4,
  HSZE_STATUS_NONCONVERGENT = 5,
  HSZE_STATUS_NUMERICAL_ERROR = 6,
  HSZE_STATUS_VERIFICATION_FAILED = 7,
  HSZE_STATUS_PANIC = 8,
} HszeStatus;

/**
 * Opaque evaluation context: precision, truncation caps and route.
 */
typedef struct HszeContext HszeContext;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Creates a context with `bits` of precision and default truncation caps.
 *
 * # Safety
 * `out` must be a valid pointer; the context is released with
 * [`hsze_context_free`].
 */
enum HszeStatus hsze_context_new(uint32_t bits, struct HszeContext **out);

/**
 * # Safety
 * `ctx` must come from [`hsze_context_new`] and not be used afterwards.
 */
void hsze_context_free(struct HszeContext *ctx);

/**
 * Sets the row and column caps of the lattice summation.
 *
 * # Safety
 * `ctx` must be a live context.
 */
enum HszeStatus hsze_context_set_caps(struct HszeContext *ctx, uint64_t max_m, uint64_t max_n);

/**
 * Selects the summation route: nonzero `naive` picks the symmetric box sums.
 *
 * # Safety
 * `ctx` must be a live context.
 */
enum HszeStatus hsze_context_set_naive_route(struct HszeContext *ctx, int naive);

/**
 * Evaluates `kind` (`g`, `k_coeff`, `hurwitz`, `eisenstein`, `theta`,
 * `phi`, `qzeta`) with whitespace separated `key=value` parameters, e.g.
 * `"k=3 r=1 z=1/2 basis=1,i"`. `out_json` receives an object with
 * `value`, `est_error`, `route` and, where available, `closed_form`.
 *
 * # Safety
 * `ctx` must be live; `kind` and `params` must be NUL-terminated strings.
 */
enum HszeStatus hsze_eval(const struct HszeContext *ctx,
                          const char *kind,
                          const char *params,
                          char **out_json);

/**
 * Like [`hsze_eval`] but returns only the value as `re+imi` with `digits`
 * significant digits.
 *
 * # Safety
 * As for [`hsze_eval`].
 */
enum HszeStatus hsze_eval_value(const struct HszeContext *ctx,
                                const char *kind,
                                const char *params,
                                uint32_t digits,
                                char **out_value);

/**
 * Runs a verification suite and writes the JSON report (without timing
 * fields). Returns `VerificationFailed` when any identity fails; the report
 * is written in that case too.
 *
 * # Safety
 * `suite` must be a NUL-terminated string and `out_json` a valid pointer.
 */
enum HszeStatus hsze_verify(const char *suite,
                            uint32_t bits,
                            uint32_t tolerance_exp,
                            uint32_t jobs,
                            char **out_json);

/**
 * Message for the last failing call on this thread; empty after a success.
 * The pointer stays valid until the next call on the same thread.
 */
const char *hsze_last_error(void);

/**
 * # Safety
 * `s` must come from this library, or be null.
 */
void hsze_string_free(char *s);

/**
 * Library version as a static string.
 */
const char *hsze_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HSZE_H */
