#ifndef EGZ_H
#define EGZ_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum EgzStatus {
  EGZ_STATUS_OK = 0,
  EGZ_STATUS_NULL_POINTER = 1,
  EGZ_STATUS_INPUT_ERROR = 2,
  EGZ_STATUS_INVARIANT_VIOLATION = 3,
  EGZ_STATUS_BUFFER_TOO_SMALL = 4,
  EGZ_STATUS_PANIC = 5,
} EgzStatus;

/**
 * Opaque list of selected 0-based positions and the modulus they solve.
 */
typedef struct EgzIndexSet EgzIndexSet;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Finds `n` of the `len = 2n - 1` values whose sum is divisible by `n`.
 *
 * # Safety
 * `values` must point to `len` readable integers; `out` must be writable.
 */
enum EgzStatus egz_solve(uint64_t n, const int64_t *values, size_t len, struct EgzIndexSet **out);

/**
 * Solves the zero-sum problem for a prime `p` with `2p - 1` values.
 *
 * # Safety
 * As for [`egz_solve`].
 */
enum EgzStatus egz_prime_egz(uint64_t p,
                             const int64_t *values,
                             size_t len,
                             struct EgzIndexSet **out);

/**
 * Picks positions of the `p - 1` nonzero differences `d` summing to
 * `tau` modulo the prime `p`. The result may be empty.
 *
 * # Safety
 * `d` must point to `len` readable integers; `out` must be writable.
 */
enum EgzStatus egz_prime_target(uint64_t p,
                                const uint64_t *d,
                                size_t len,
                                uint64_t tau,
                                struct EgzIndexSet **out);

/**
 * Writes whether `indices` (0-based) certify the instance into `*valid`.
 * A rejected certificate still returns OK.
 *
 * # Safety
 * `values` and `indices` must point to `len` and `count` readable
 * elements; `valid` must be writable.
 */
enum EgzStatus egz_verify(uint64_t n,
                          const int64_t *values,
                          size_t len,
                          const size_t *indices,
                          size_t count,
                          bool *valid);

/**
 * Number of indices in the set; 0 for NULL.
 *
 * # Safety
 * `set` must be NULL or a live handle.
 */
size_t egz_index_set_len(const struct EgzIndexSet *set);

/**
 * Modulus the set was computed for; 0 for NULL.
 *
 * # Safety
 * `set` must be NULL or a live handle.
 */
uint64_t egz_index_set_modulus(const struct EgzIndexSet *set);

/**
 * Copies the ascending indices into `buf`, which must hold at least
 * [`egz_index_set_len`] entries.
 *
 * # Safety
 * `set` must be a live handle and `buf` writable for `cap` entries.
 */
enum EgzStatus egz_index_set_copy(const struct EgzIndexSet *set, size_t *buf, size_t cap);

/**
 * Releases a handle. NULL is ignored.
 *
 * # Safety
 * `set` must be NULL or a handle not yet freed.
 */
void egz_index_set_free(struct EgzIndexSet *set);

/**
 * Copies the calling thread's last error message, NUL-terminated and
 * truncated to `cap` bytes, and returns the untruncated length plus one.
 * Pass `cap = 0` to query the size.
 *
 * # Safety
 * `buf` must be writable for `cap` bytes (or NULL when `cap` is 0).
 */
size_t egz_last_error(char *buf, size_t cap);

/**
 * Library version as a static NUL-terminated string.
 */
const char *egz_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* EGZ_H */
