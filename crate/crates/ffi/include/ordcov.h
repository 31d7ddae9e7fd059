#ifndef ORDCOV_H
#define ORDCOV_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes shared by every exported function.
 */
typedef enum OrdcovStatus {
  ORDCOV_STATUS_OK = 0,
  ORDCOV_STATUS_NULL_POINTER = 1,
  ORDCOV_STATUS_INVALID_UTF8 = 2,
  ORDCOV_STATUS_SYNTAX = 3,
  ORDCOV_STATUS_NOT_A_LIMIT = 4,
  ORDCOV_STATUS_OVERFLOW = 5,
  ORDCOV_STATUS_CAP_EXCEEDED = 6,
  ORDCOV_STATUS_OUT_OF_RANGE = 7,
  ORDCOV_STATUS_FAILED = 8,
  ORDCOV_STATUS_PANIC = 9,
} OrdcovStatus;

/**
 * Opaque ordinal below epsilon_0.
 */
typedef struct OrdcovOrdinal OrdcovOrdinal;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread. The pointer stays
 * valid until the next failing call on the same thread.
 */
const char *ordcov_last_error(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void ordcov_string_free(char *s);

/**
 * Parses ordinal text such as `"w^w + 3"`.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be writable.
 */
enum OrdcovStatus ordcov_ordinal_parse(const char *text, struct OrdcovOrdinal **out);

/**
 * Releases an ordinal handle. Null is ignored.
 *
 * # Safety
 * `a` must come from this library and not have been freed.
 */
void ordcov_ordinal_free(struct OrdcovOrdinal *a);

/**
 * Canonical text of `a`.
 *
 * # Safety
 * `a` must be a live handle; `out` must be writable.
 */
enum OrdcovStatus ordcov_ordinal_to_string(const struct OrdcovOrdinal *a, char **out);

/**
 * Writes -1, 0 or 1 as `a` is less than, equal to or greater than `b`.
 *
 * # Safety
 * `a` and `b` must be live handles; `out` must be writable.
 */
enum OrdcovStatus ordcov_ordinal_compare(const struct OrdcovOrdinal *a,
                                         const struct OrdcovOrdinal *b,
                                         int32_t *out);

/**
 * Ordinal sum `a + b` as a new handle.
 *
 * # Safety
 * `a` and `b` must be live handles; `out` must be writable.
 */
enum OrdcovStatus ordcov_ordinal_add(const struct OrdcovOrdinal *a,
                                     const struct OrdcovOrdinal *b,
                                     struct OrdcovOrdinal **out);

/**
 * The `n`-th element of the fundamental sequence of the limit `a`.
 *
 * # Safety
 * `a` must be a live handle; `out` must be writable.
 */
enum OrdcovStatus ordcov_fund_seq(const struct OrdcovOrdinal *a,
                                  uint64_t n,
                                  struct OrdcovOrdinal **out);

/**
 * Whether there is a covering edge from `x` to `a`.
 *
 * # Safety
 * `x` and `a` must be live handles; `out` must be writable.
 */
enum OrdcovStatus ordcov_covers(const struct OrdcovOrdinal *x,
                                const struct OrdcovOrdinal *a,
                                bool *out);

/**
 * Canonical degree word of `a` in comma text form, e.g. `"1(2)^w"`.
 *
 * # Safety
 * `a` must be a live handle; `out` must be writable.
 */
enum OrdcovStatus ordcov_degree_word(const struct OrdcovOrdinal *a, char **out);

/**
 * JSON export of the covering-graph prefix of `a` to the given depth.
 *
 * # Safety
 * `a` must be a live handle; `out` must be writable.
 */
enum OrdcovStatus ordcov_graph_json(const struct OrdcovOrdinal *a, size_t depth, char **out);

/**
 * Stack encoding of `a` at the given level, in bracketed text form.
 *
 * # Safety
 * `a` must be a live handle; `out` must be writable.
 */
enum OrdcovStatus ordcov_stack_encode(const struct OrdcovOrdinal *a, size_t level, char **out);

/**
 * Decodes stack text back to an ordinal handle.
 *
 * # Safety
 * `stack` must be a NUL-terminated string; `out` must be writable.
 */
enum OrdcovStatus ordcov_stack_decode(const char *stack, struct OrdcovOrdinal **out);

/**
 * Runs a property suite with default parameters. `passed` receives the
 * verdict and `report` the printed report.
 *
 * # Safety
 * `name` must be a NUL-terminated string; `passed` and `report` must be
 * writable.
 */
enum OrdcovStatus ordcov_verify(const char *name, bool *passed, char **report);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ORDCOV_H */
