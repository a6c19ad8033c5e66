#ifndef QRANK_H
#define QRANK_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes. Zero is success.
 */
typedef enum QrStatus {
  QR_STATUS_OK = 0,
  QR_STATUS_NULL_POINTER = 1,
  /**
   * Malformed target, number or UTF-8.
   */
  QR_STATUS_PARSE = 2,
  /**
   * Argument outside the mathematical domain.
   */
  QR_STATUS_DOMAIN = 3,
  /**
   * A size limit was hit, or the series is not known far enough.
   */
  QR_STATUS_RESOURCE_LIMIT = 4,
  /**
   * Any other library error.
   */
  QR_STATUS_MATH = 5,
  /**
   * A Rust panic was caught at the boundary.
   */
  QR_STATUS_PANIC = 6,
} QrStatus;

/**
 * An exact truncated q-series with rational coefficients.
 */
typedef struct QrSeries QrSeries;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread; empty after a success.
 * The pointer stays valid until the next call on the same thread.
 */
const char *qr_last_error(void);

/**
 * Expands `target` (see `qrank expand`) below `q^order` into `*out`.
 *
 * # Safety
 * `target` must be a NUL-terminated string and `out` a valid pointer.
 */
enum QrStatus qr_expand(const char *target, int64_t order, struct QrSeries **out);

/**
 * Releases a series. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void qr_series_free(struct QrSeries *s);

/**
 * Number of stored nonzero coefficients.
 *
 * # Safety
 * `s` must be null or a live series.
 */
size_t qr_series_len(const struct QrSeries *s);

/**
 * Truncation order as a string such as `"25"` or `"7/5"`; `"exact"` for
 * finite series.
 *
 * # Safety
 * `s` must be a live series and `out` a valid pointer.
 */
enum QrStatus qr_series_order(const struct QrSeries *s, char **out);

/**
 * Coefficient of `q^exponent`, both as rational strings (`"-3/10"`).
 * Exponents at or beyond the truncation give [`QrStatus::ResourceLimit`].
 *
 * # Safety
 * `s` must be a live series, `exponent` a NUL-terminated string, `out` valid.
 */
enum QrStatus qr_series_coeff(const struct QrSeries *s, const char *exponent, char **out);

/**
 * The series as `# O(q^N)` followed by `exponent<TAB>coefficient` lines.
 *
 * # Safety
 * `s` must be a live series and `out` a valid pointer.
 */
enum QrStatus qr_series_dump(const struct QrSeries *s, char **out);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void qr_string_free(char *s);

/**
 * Verifies the shipped database rows at prime `p` (0 for all rows) and
 * reports how many were checked and how many verified.
 *
 * # Safety
 * `total` and `verified` must be valid pointers.
 */
enum QrStatus qr_verify_db(int64_t p, uint32_t *total, uint32_t *verified);

/**
 * Runs a named congruence scan over `n = 0..=n_max`; `*holds` is 1 when
 * every combination in it satisfies the congruence.
 *
 * # Safety
 * `id` must be a NUL-terminated string and `holds` a valid pointer.
 */
enum QrStatus qr_scan(const char *id, uint32_t n_max, int32_t *holds);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QRANK_H */
