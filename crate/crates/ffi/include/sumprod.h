#ifndef SUMPROD_H
#define SUMPROD_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SumprodStatus {
  SUMPROD_STATUS_OK = 0,
  SUMPROD_STATUS_NULL_POINTER = 1,
  SUMPROD_STATUS_INVALID_ARGUMENT = 2,
  SUMPROD_STATUS_BUDGET_EXHAUSTED = 3,
  SUMPROD_STATUS_INTERNAL = 4,
} SumprodStatus;

/**
 * Opaque set of distinct positive integers.
 */
typedef struct SumprodSet SumprodSet;

typedef struct SumprodMaxPair {
  size_t sum_size;
  size_t product_size;
  size_t maximum;
} SumprodMaxPair;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or NULL. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *sumprod_last_error(void);

/**
 * Builds a set from `len` values. Duplicates collapse; zero is rejected.
 *
 * # Safety
 * `values` must point to `len` readable `uint64_t`; `out` must be writable.
 */
enum SumprodStatus sumprod_set_new(const uint64_t *values, size_t len, struct SumprodSet **out);

/**
 * # Safety
 * `set` must be NULL or a handle from [`sumprod_set_new`] not yet freed.
 */
void sumprod_set_free(struct SumprodSet *set);

/**
 * Number of distinct elements, 0 for NULL.
 *
 * # Safety
 * `set` must be NULL or a live handle.
 */
size_t sumprod_set_len(const struct SumprodSet *set);

/**
 * `|A+A|`, `|AA|` and their maximum.
 *
 * # Safety
 * `set` must be a live handle and `out` writable.
 */
enum SumprodStatus sumprod_set_max_pair(const struct SumprodSet *set, struct SumprodMaxPair *out);

/**
 * Writes 1 to `out` when all pairwise sums are distinct, else 0.
 *
 * # Safety
 * `set` must be a live handle and `out` writable.
 */
enum SumprodStatus sumprod_set_is_sidon(const struct SumprodSet *set, bool *out);

/**
 * Least `max(|A+A|, |AA|)` over `k`-subsets of `{1, ..., m}`. A `budget`
 * of 0 means unlimited; running out returns `BudgetExhausted` with the best
 * value found so far written to `value`.
 *
 * # Safety
 * `value` must be writable.
 */
enum SumprodStatus sumprod_sp_upper_bound(size_t k, uint64_t m, uint64_t budget, size_t *value);

/**
 * Certificate for `k` at search cap `m` as canonical JSON. Release the
 * string with [`sumprod_string_free`].
 *
 * # Safety
 * `out` must be writable.
 */
enum SumprodStatus sumprod_certificate_json(size_t k, uint64_t m, char **out);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library, not yet freed.
 */
void sumprod_string_free(char *s);

/**
 * Library version as a static string.
 */
const char *sumprod_version(void);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* SUMPROD_H */
