#ifndef TRADE_FFI_H
#define TRADE_FFI_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum TradeExistence {
  TRADE_EXISTENCE_EXISTS = 0,
  TRADE_EXISTENCE_NOT_EXISTS = 1,
  TRADE_EXISTENCE_OPEN_IN_PAPER = 2,
} TradeExistence;

typedef enum TradeFormat {
  TRADE_FORMAT_TEXT = 0,
  TRADE_FORMAT_JSON = 1,
} TradeFormat;

typedef enum TradeStatus {
  TRADE_STATUS_OK = 0,
  TRADE_STATUS_NULL_POINTER = 1,
  TRADE_STATUS_INVALID_UTF8 = 2,
  TRADE_STATUS_PARSE_ERROR = 3,
  /**
   * The requested object does not exist or is not known to exist.
   */
  TRADE_STATUS_NOT_FOUND = 4,
  TRADE_STATUS_BUDGET_EXHAUSTED = 5,
  TRADE_STATUS_BUFFER_TOO_SMALL = 6,
  TRADE_STATUS_PARAMETER_MISMATCH = 7,
  TRADE_STATUS_INTERNAL = 8,
} TradeStatus;

/**
 * A trade owned by the caller.
 */
typedef struct TradeHandle TradeHandle;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Static, NUL-terminated description of a status code.
 */
const char *trade_status_message(enum TradeStatus status);

/**
 * Parse a trade in text or JSON form (detected).
 *
 * # Safety
 * `text` must be NUL-terminated; `out` must be writable.
 */
enum TradeStatus trade_parse(const char *text, struct TradeHandle **out);

/**
 * Release a handle; null is ignored.
 *
 * # Safety
 * `h` must come from this library and not be used afterwards.
 */
void trade_free(struct TradeHandle *h);

/**
 * Build a 3-way `d`-homogeneous `(v,3,2)` Steiner trade. Returns
 * `TRADE_STATUS_NOT_FOUND` unless existence is established.
 *
 * # Safety
 * `out` must be writable.
 */
enum TradeStatus trade_construct(size_t d,
                                 size_t v,
                                 uint64_t budget,
                                 uint64_t seed,
                                 struct TradeHandle **out);

/**
 * A named catalog object (see `trades catalog list`).
 *
 * # Safety
 * `name` must be NUL-terminated; `out` must be writable.
 */
enum TradeStatus trade_catalog_emit(const char *name, uint64_t seed, struct TradeHandle **out);

/**
 * `*valid` is 1 when the trade passes; `steiner` nonzero adds the at-most-once
 * check and `d` nonzero the homogeneity check.
 *
 * # Safety
 * `h` must be a live handle; `valid` must be writable.
 */
enum TradeStatus trade_verify(const struct TradeHandle *h,
                              int32_t steiner,
                              size_t d,
                              int32_t *valid);

/**
 * Number of blocks per collection.
 *
 * # Safety
 * `h` must be a live handle; `out` must be writable.
 */
enum TradeStatus trade_volume(const struct TradeHandle *h, size_t *out);

/**
 * Number of points; `TRADE_STATUS_PARAMETER_MISMATCH` when collections
 * cover different point sets.
 *
 * # Safety
 * `h` must be a live handle; `out` must be writable.
 */
enum TradeStatus trade_foundation_size(const struct TradeHandle *h, size_t *out);

/**
 * Disjoint union; labels of `b` are shifted past those of `a`.
 *
 * # Safety
 * `a` and `b` must be live handles; `out` must be writable.
 */
enum TradeStatus trade_disjoint_union(const struct TradeHandle *a,
                                      const struct TradeHandle *b,
                                      struct TradeHandle **out);

/**
 * Serialize into `buf` (NUL-terminated). `*needed` receives the size
 * including the NUL, so a first call with `cap = 0` sizes the buffer.
 *
 * # Safety
 * `h` must be a live handle; `buf` must hold `cap` bytes; `needed` must be writable.
 */
enum TradeStatus trade_write(const struct TradeHandle *h,
                             enum TradeFormat format,
                             int32_t one_based,
                             char *buf,
                             size_t cap,
                             size_t *needed);

/**
 * Existence status for `(d, v)` and its citation, e.g. `Theorem 19`.
 *
 * # Safety
 * `status` and `needed` must be writable; `buf` must hold `cap` bytes.
 */
enum TradeStatus trade_solve(size_t d,
                             size_t v,
                             enum TradeExistence *status,
                             char *buf,
                             size_t cap,
                             size_t *needed);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TRADE_FFI_H */
