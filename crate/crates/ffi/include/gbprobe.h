#ifndef GBPROBE_H
#define GBPROBE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum GbpStatus {
  GBP_STATUS_OK = 0,
  GBP_STATUS_NULL_POINTER = 1,
  GBP_STATUS_INVALID_UTF8 = 2,
  GBP_STATUS_PARSE = 3,
  GBP_STATUS_MATH = 4,
  GBP_STATUS_PANIC = 5,
} GbpStatus;

/**
 * Opaque oracle handle.
 */
typedef struct GbpOracle GbpOracle;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Builds an oracle from the text of a commutative ideal file
 * (`ring n=.. p=.. order=..` then one polynomial per line).
 *
 * # Safety
 * `ideal` must be a NUL-terminated string and `out` a valid pointer. The
 * handle written to `*out` must be released with [`gbp_oracle_free`].
 */
enum GbpStatus gbp_oracle_new(const char *ideal, struct GbpOracle **out);

/**
 * # Safety
 * `o` must come from [`gbp_oracle_new`] and not have been freed; null is
 * ignored.
 */
void gbp_oracle_free(struct GbpOracle *o);

/**
 * Canonical form of a term such as `X1^2*X2`, as polynomial text. The
 * string written to `*out` must be released with [`gbp_string_free`].
 *
 * # Safety
 * `o` must be a live handle, `term` a NUL-terminated string and `out` a
 * valid pointer.
 */
enum GbpStatus gbp_oracle_can(struct GbpOracle *o, const char *term, char **out);

/**
 * Whether a term lies in the leading-term ideal. One query.
 *
 * # Safety
 * `o` must be a live handle, `term` a NUL-terminated string and `out` a
 * valid pointer.
 */
enum GbpStatus gbp_oracle_member(struct GbpOracle *o, const char *term, bool *out);

/**
 * Queries answered so far; 0 for a null handle.
 *
 * # Safety
 * `o` must be null or a live handle.
 */
uint64_t gbp_oracle_query_count(const struct GbpOracle *o);

/**
 * Reconstructs generators and reduced basis inside the box of side `bound`
 * and writes the result file text to `*out`. Queries are charged to `o`.
 *
 * # Safety
 * `o` must be a live handle and `out` a valid pointer. The string must be
 * released with [`gbp_string_free`].
 */
enum GbpStatus gbp_reconstruct(struct GbpOracle *o, uint32_t bound, char **out);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void gbp_string_free(char *s);

/**
 * Message of the last failure on this thread, or null. Valid until the
 * next failing call on the same thread.
 */
const char *gbp_last_error(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GBPROBE_H */
