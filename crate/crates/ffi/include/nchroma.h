#ifndef NCHROMA_H
#define NCHROMA_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes shared by every call.
 */
typedef enum NcStatus {
  NC_STATUS_OK = 0,
  NC_STATUS_NULL_POINTER = 1,
  NC_STATUS_INVALID_ARGUMENT = 2,
  NC_STATUS_INVALID_GRAPH = 3,
  NC_STATUS_DISCONNECTED = 4,
  NC_STATUS_ORACLE_CAP_EXCEEDED = 5,
  /**
   * The solver stopped at its node budget; the result is a lower bound.
   */
  NC_STATUS_INCOMPLETE = 6,
  NC_STATUS_INVALID_COLORING = 7,
  NC_STATUS_PARSE = 8,
  NC_STATUS_INTERNAL = 9,
} NcStatus;

/**
 * Opaque graph handle.
 */
typedef struct NcGraph NcGraph;

typedef struct NcSolveResult {
  size_t value;
  uint64_t nodes;
  bool complete;
} NcSolveResult;

/**
 * Message for the most recent failure on this thread; empty if none. The
 * pointer stays valid until the next failing call on the same thread.
 */
const char *nc_last_error(void);

/**
 * Static description of a status code.
 */
const char *nc_status_str(enum NcStatus status);

/**
 * Builds a graph on `n` vertices from `m` edges given as `2m` endpoint ids.
 *
 * # Safety
 * `edges` must point to `2 * m` readable values (it may be null when
 * `m == 0`); `out` must be writable.
 */
enum NcStatus nc_graph_new(size_t n, const size_t *edges, size_t m, struct NcGraph **out);

/**
 * Parses graph JSON or a plain edge list.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be writable.
 */
enum NcStatus nc_graph_from_text(const char *text, struct NcGraph **out);

/**
 * Releases a handle; null is ignored.
 *
 * # Safety
 * `g` must come from this library and not be used afterwards.
 */
void nc_graph_free(struct NcGraph *g);

/**
 * Number of vertices, or 0 for a null handle.
 *
 * # Safety
 * `g` must be null or a live handle.
 */
size_t nc_graph_order(const struct NcGraph *g);

/**
 * Number of edges, or 0 for a null handle.
 *
 * # Safety
 * `g` must be null or a live handle.
 */
size_t nc_graph_edge_count(const struct NcGraph *g);

/**
 * Computes t_i with the branch-and-bound solver. A `node_budget` of 0 uses
 * the library default. On `NC_STATUS_INCOMPLETE` the result still holds the
 * best coloring found.
 *
 * # Safety
 * `g` must be a live handle, `out` writable, and `witness` null or writable
 * for `nc_graph_order(g)` values.
 */
enum NcStatus nc_solve(const struct NcGraph *g,
                       size_t i,
                       uint64_t node_budget,
                       bool parallel,
                       struct NcSolveResult *out,
                       uint32_t *witness);

/**
 * Computes t_i by exhaustive enumeration (at most 11 vertices).
 *
 * # Safety
 * As for `nc_solve`.
 */
enum NcStatus nc_oracle(const struct NcGraph *g,
                        size_t i,
                        struct NcSolveResult *out,
                        uint32_t *witness);

/**
 * Checks a coloring. Returns `NC_STATUS_OK` when valid and
 * `NC_STATUS_INVALID_COLORING` otherwise; `violations` (nullable) receives
 * the number of vertices seeing more than `i` colors.
 *
 * # Safety
 * `colors` must point to `len` readable values; `violations` must be null
 * or writable.
 */
enum NcStatus nc_verify(const struct NcGraph *g,
                        const uint32_t *colors,
                        size_t len,
                        size_t i,
                        size_t *violations);

/**
 * Writes the bound report as a JSON string.
 *
 * # Safety
 * `g` must be a live handle and `out` writable.
 */
enum NcStatus nc_bounds_json(const struct NcGraph *g, size_t i, char **out);

/**
 * Audits one graph and writes the discrepancy CSV (header row included).
 * `label` (nullable) names the graph in the rows. Returns
 * `NC_STATUS_INCOMPLETE` without output when the exact value is out of reach.
 *
 * # Safety
 * `g` must be a live handle, `label` null or NUL-terminated, `out` writable.
 */
enum NcStatus nc_audit_csv(const struct NcGraph *g, size_t i, const char *label, char **out);

/**
 * Releases a string returned by this library; null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void nc_string_free(char *s);

#endif  /* NCHROMA_H */
