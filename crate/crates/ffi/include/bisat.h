#ifndef BISAT_H
#define BISAT_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum BisatBound {
  BISAT_BOUND_EHM = 0,
  BISAT_BOUND_ORDERED = 1,
  BISAT_BOUND_CONJECTURE = 2,
  BISAT_BOUND_THEOREM = 3,
  BISAT_BOUND_PROP1 = 4,
  BISAT_BOUND_WSAT_ENVELOPE = 5,
} BisatBound;

/**
 * Values accepted by the `orientation` parameters.
 */
typedef enum BisatOrientation {
  BISAT_ORIENTATION_UNORDERED = 0,
  BISAT_ORIENTATION_ORDERED = 1,
} BisatOrientation;

typedef enum BisatStatus {
  BISAT_STATUS_OK = 0,
  BISAT_STATUS_NULL_POINTER = 1,
  BISAT_STATUS_INVALID_ARGUMENT = 2,
  BISAT_STATUS_OUT_OF_RANGE = 3,
  BISAT_STATUS_PARSE_ERROR = 4,
  BISAT_STATUS_INFEASIBLE = 5,
  BISAT_STATUS_PANIC = 6,
} BisatStatus;

/**
 * Opaque graph handle.
 */
typedef struct BisatGraph BisatGraph;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. Valid until the
 * next failing call on the same thread.
 */
const char *bisat_last_error_message(void);

/**
 * Empty graph with the given side sizes.
 *
 * # Safety
 * `out` must be a valid pointer to write a handle to.
 */
enum BisatStatus bisat_graph_new(size_t n_left, size_t n_right, struct BisatGraph **out);

/**
 * # Safety
 * `g` must be null or a handle from this library not yet freed.
 */
void bisat_graph_free(struct BisatGraph *g);

/**
 * # Safety
 * `g` must be a live handle.
 */
enum BisatStatus bisat_graph_clone(const struct BisatGraph *g, struct BisatGraph **out);

/**
 * Adds `uv`; `changed` (may be null) receives whether it was absent.
 *
 * # Safety
 * `g` must be a live handle; `changed` null or writable.
 */
enum BisatStatus bisat_graph_add_edge(struct BisatGraph *g, size_t u, size_t v, bool *changed);

/**
 * # Safety
 * `g` must be a live handle; `changed` null or writable.
 */
enum BisatStatus bisat_graph_remove_edge(struct BisatGraph *g, size_t u, size_t v, bool *changed);

/**
 * # Safety
 * `g` must be a live handle; `out` writable.
 */
enum BisatStatus bisat_graph_has_edge(const struct BisatGraph *g, size_t u, size_t v, bool *out);

/**
 * Edge count, or 0 for a null handle.
 *
 * # Safety
 * `g` must be null or a live handle.
 */
size_t bisat_graph_edge_count(const struct BisatGraph *g);

/**
 * # Safety
 * `g` must be null or a live handle.
 */
size_t bisat_graph_n_left(const struct BisatGraph *g);

/**
 * # Safety
 * `g` must be null or a live handle.
 */
size_t bisat_graph_n_right(const struct BisatGraph *g);

/**
 * Parses bmat text.
 *
 * # Safety
 * `text` must be a nul-terminated string; `out` writable.
 */
enum BisatStatus bisat_parse_bmat(const char *text, struct BisatGraph **out);

/**
 * bmat text of `g`; release with `bisat_string_free`.
 *
 * # Safety
 * `g` must be a live handle; `out` writable.
 */
enum BisatStatus bisat_graph_to_bmat(const struct BisatGraph *g, char **out);

/**
 * # Safety
 * `s` must be null or a string returned by this library not yet freed.
 */
void bisat_string_free(char *s);

/**
 * # Safety
 * `g` must be a live handle; `out` writable.
 */
enum BisatStatus bisat_is_saturated(const struct BisatGraph *g,
                                    size_t s,
                                    size_t t,
                                    int32_t orientation,
                                    bool *out);

/**
 * # Safety
 * `g` must be a live handle; `out` writable.
 */
enum BisatStatus bisat_is_weakly_saturated(const struct BisatGraph *g,
                                           size_t s,
                                           size_t t,
                                           int32_t orientation,
                                           bool *out);

/**
 * Block family with default anchors and zero seeds.
 *
 * # Safety
 * `out` writable.
 */
enum BisatStatus bisat_build_family(size_t s,
                                    size_t t,
                                    size_t n,
                                    size_t l,
                                    struct BisatGraph **out);

/**
 * # Safety
 * `out` writable.
 */
enum BisatStatus bisat_build_ordered_star(size_t s, size_t t, size_t n, struct BisatGraph **out);

/**
 * # Safety
 * `out` writable.
 */
enum BisatStatus bisat_build_k23_extremal(size_t n, struct BisatGraph **out);

/**
 * Greedy saturation of a copy-free seed graph into a new handle.
 *
 * # Safety
 * `g` must be a live handle; `out` writable.
 */
enum BisatStatus bisat_greedy_saturate(const struct BisatGraph *g,
                                       size_t s,
                                       size_t t,
                                       int32_t orientation,
                                       uint64_t seed,
                                       struct BisatGraph **out);

/**
 * Exact saturation number on an `n x n` host. `witness` may be null;
 * otherwise it receives a new handle holding one minimum graph.
 *
 * # Safety
 * `minimum` writable; `witness` null or writable.
 */
enum BisatStatus bisat_search_sat(size_t n,
                                  size_t s,
                                  size_t t,
                                  int32_t orientation,
                                  size_t *minimum,
                                  struct BisatGraph **witness);

/**
 * Exact weak saturation number on an `n x n` host.
 *
 * # Safety
 * `minimum` writable; `witness` null or writable.
 */
enum BisatStatus bisat_search_wsat(size_t n,
                                   size_t s,
                                   size_t t,
                                   int32_t orientation,
                                   size_t *minimum,
                                   struct BisatGraph **witness);

/**
 * Closed-form value for a `BisatBound` kind; `in_range` (may be null) receives whether the inputs are
 * inside the range the formula is stated for.
 *
 * # Safety
 * `value` writable; `in_range` null or writable.
 */
enum BisatStatus bisat_bound(int32_t kind,
                             size_t s,
                             size_t t,
                             size_t n,
                             int64_t *value,
                             bool *in_range);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BISAT_H */
