#ifndef LOCALENUM_H
#define LOCALENUM_H

/* Generated by cbindgen; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status code returned by every fallible entry point.
typedef enum LeStatus {
  LE_STATUS_OK = 0,
  LE_STATUS_NULL_ARGUMENT = 1,
  LE_STATUS_INVALID_ARGUMENT = 2,
  LE_STATUS_PARSE_ERROR = 3,
  // A model of weight below the requested depth exists.
  LE_STATUS_PROMISE_VIOLATION = 4,
  LE_STATUS_UNSATISFIABLE = 5,
  LE_STATUS_LIMIT_EXCEEDED = 6,
} LeStatus;

// Clause ordering selector.
typedef enum LeOrdering {
  LE_ORDERING_CANONICAL = 0,
  LE_ORDERING_AS_GIVEN = 1,
} LeOrdering;

// Tree-edge ordering selector; `seed` is ignored for `Fixed`.
typedef enum LeEdgeOrder {
  LE_EDGE_ORDER_FIXED = 0,
  LE_EDGE_ORDER_RANDOM = 1,
} LeEdgeOrder;

// Opaque formula handle.
typedef struct le_formula_t le_formula_t;

// Opaque enumeration-outcome handle.
typedef struct le_outcome_t le_outcome_t;

// The headline constants of the running-time analysis.
typedef struct LeHeadlineConstants {
  double enum_half_base;
  double majority_lb_base;
  double maj_family_base;
  double c;
  double h2_c;
  double entropy_base;
  double mprime_base;
  double balance_gap;
} LeHeadlineConstants;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the most recent error on this thread. The pointer stays
// valid until the next failing call on the same thread.
const char *le_last_error_message(void);

// Parses a DIMACS CNF string into a formula handle.
//
// # Safety
// `text` must be a valid NUL-terminated string and `out` a valid pointer.
enum LeStatus le_formula_parse_dimacs(const char *text, struct le_formula_t **out);

// Block-majority generator; `n` must be divisible by `2(k-1)`.
//
// # Safety
// `out` must be a valid pointer.
enum LeStatus le_formula_gen_maj(size_t n, size_t k, struct le_formula_t **out);

// `t` pairwise-disjoint positive width-2 clauses over `n` variables.
//
// # Safety
// `out` must be a valid pointer.
enum LeStatus le_formula_gen_disjoint2(size_t t, size_t n, struct le_formula_t **out);

// Seeded random k-CNF with `m` clauses of width exactly `k`.
//
// # Safety
// `out` must be a valid pointer.
enum LeStatus le_formula_gen_random(size_t n,
                                    size_t m,
                                    size_t k,
                                    bool monotone,
                                    uint64_t seed,
                                    struct le_formula_t **out);

// # Safety
// `f` must be a live formula handle.
size_t le_formula_num_vars(const struct le_formula_t *f);

// # Safety
// `f` must be a live formula handle.
size_t le_formula_num_clauses(const struct le_formula_t *f);

// Serializes a formula to DIMACS. The returned string must be released
// with [`le_string_free`]; null on error.
//
// # Safety
// `f` must be a live formula handle.
char *le_formula_to_dimacs(const struct le_formula_t *f);

// Releases a string returned by this library. Null is a no-op.
//
// # Safety
// `s` must come from [`le_formula_to_dimacs`] and not be freed twice.
void le_string_free(char *s);

// Releases a formula handle. Null is a no-op.
//
// # Safety
// `f` must be a pointer previously returned by a formula constructor and
// not yet freed.
void le_formula_free(struct le_formula_t *f);

// Enumerates all models at Hamming distance exactly `t` from the center
// given as an array of `alpha_len` 1-based variable indices (the
// variables set to 1). Requires that no model lies closer.
//
// # Safety
// `f` and `out` must be valid; `alpha` must point to `alpha_len` entries.
enum LeStatus le_enumerate_at_distance(const struct le_formula_t *f,
                                       const uint32_t *alpha,
                                       size_t alpha_len,
                                       size_t t,
                                       enum LeOrdering order,
                                       enum LeEdgeOrder edge_order,
                                       uint64_t seed,
                                       struct le_outcome_t **out);

// Finds the minimum model weight and enumerates all models there.
//
// # Safety
// `f` and `out` must be valid pointers.
enum LeStatus le_enumerate_min(const struct le_formula_t *f,
                               enum LeOrdering order,
                               enum LeEdgeOrder edge_order,
                               uint64_t seed,
                               struct le_outcome_t **out);

// # Safety
// `o` must be a live outcome handle.
size_t le_outcome_count(const struct le_outcome_t *o);

// # Safety
// `o` must be a live outcome handle.
size_t le_outcome_depth(const struct le_outcome_t *o);

// # Safety
// `o` must be a live outcome handle.
uint64_t le_outcome_leaves_visited(const struct le_outcome_t *o);

// # Safety
// `o` must be a live outcome handle.
uint64_t le_outcome_nodes_expanded(const struct le_outcome_t *o);

// # Safety
// `o` must be a live outcome handle.
uint64_t le_outcome_edges_pruned(const struct le_outcome_t *o);

// Number of variables in the `index`-th assignment.
//
// # Safety
// `o` must be a live outcome handle.
size_t le_outcome_assignment_len(const struct le_outcome_t *o, size_t index);

// Copies the `index`-th assignment (ascending 1-based variable indices)
// into `buf` and returns the number of entries written, at most
// `buf_len`.
//
// # Safety
// `o` must be live; `buf` must point to at least `buf_len` entries.
size_t le_outcome_assignment(const struct le_outcome_t *o,
                             size_t index,
                             uint32_t *buf,
                             size_t buf_len);

// Releases an outcome handle. Null is a no-op.
//
// # Safety
// `o` must be a pointer previously returned by an enumeration call and
// not yet freed.
void le_outcome_free(struct le_outcome_t *o);

// Minimum model weight, written to `out_t`.
//
// # Safety
// `f` and `out_t` must be valid pointers.
enum LeStatus le_tau(const struct le_formula_t *f,
                     enum LeOrdering order,
                     enum LeEdgeOrder edge_order,
                     uint64_t seed,
                     size_t *out_t);

// Whether a model lies within distance `t` of the center; result in
// `out_sat`.
//
// # Safety
// `f` and `out_sat` must be valid; `alpha` must point to `alpha_len`
// entries.
enum LeStatus le_ball_sat(const struct le_formula_t *f,
                          const uint32_t *alpha,
                          size_t alpha_len,
                          size_t t,
                          enum LeOrdering order,
                          enum LeEdgeOrder edge_order,
                          uint64_t seed,
                          bool *out_sat);

// 3-SAT decision via distance-`ceil(n/2)` searches from both poles.
//
// # Safety
// `f` and `out_sat` must be valid pointers.
enum LeStatus le_sat3(const struct le_formula_t *f,
                      enum LeEdgeOrder edge_order,
                      uint64_t seed,
                      bool *out_sat);

// # Safety
// `out` must be a valid pointer.
enum LeStatus le_headline_constants(struct LeHeadlineConstants *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LOCALENUM_H */
