#ifndef SURFACE_BASIS_H
#define SURFACE_BASIS_H

/* This header is generated by cbindgen from surface-basis-capi; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible function.
 */
typedef enum {
  SB_OK = 0,
  /**
   * Malformed instance text or an invalid embedding.
   */
  SB_ERR_PARSE = 1,
  /**
   * The operation does not apply (e.g. cycle basis of a non-orientable
   * embedding, oracle verification beyond its size limits).
   */
  SB_ERR_UNSUPPORTED = 2,
  /**
   * Null pointer argument or output buffer too small.
   */
  SB_ERR_ARGUMENT = 3,
  /**
   * Internal invariant violation.
   */
  SB_ERR_INTERNAL = 4,
} sb_status;

/**
 * Opaque computed basis.
 */
typedef struct sb_basis sb_basis;

/**
 * Opaque parsed instance.
 */
typedef struct sb_graph sb_graph;

/**
 * Topological invariants of an instance.
 */
typedef struct {
  size_t vertices;
  size_t edges;
  /**
   * Faces including those flagged as boundary components.
   */
  size_t faces;
  size_t boundary_components;
  /**
   * Euler characteristic of the capped surface.
   */
  int64_t euler_characteristic;
  size_t genus;
  /**
   * 1 when orientable.
   */
  int32_t orientable;
  /**
   * First Z2-homology rank.
   */
  size_t homology_rank;
} sb_stats;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread, or an empty string.
 * The pointer stays valid until the next failing call on the same thread.
 */
const char *sb_last_error_message(void);

/**
 * Parses instance text (see the text format documentation) into a graph
 * handle. On success `*out` owns the graph; free it with [`sb_graph_free`].
 *
 * # Safety
 * `text` must be a valid NUL-terminated string and `out` a valid pointer.
 */
sb_status sb_graph_parse_text(const char *text, sb_graph **out);

/**
 * Reads and parses an instance file.
 *
 * # Safety
 * `path` must be a valid NUL-terminated string and `out` a valid pointer.
 */
sb_status sb_graph_parse_file(const char *path, sb_graph **out);

/**
 * # Safety
 * `g` must come from a parse function and not have been freed.
 */
void sb_graph_free(sb_graph *g);

/**
 * # Safety
 * `g` must be a live graph handle, `out` a valid pointer.
 */
sb_status sb_graph_stats(const sb_graph *g, sb_stats *out);

/**
 * Computes a minimum cycle basis. Fails with `SB_ERR_UNSUPPORTED` on
 * non-orientable embeddings.
 *
 * # Safety
 * `g` must be a live graph handle, `out` a valid pointer.
 */
sb_status sb_minimum_cycle_basis(const sb_graph *g, sb_basis **out);

/**
 * Computes a minimum homology basis (orientable or not).
 *
 * # Safety
 * `g` must be a live graph handle, `out` a valid pointer.
 */
sb_status sb_minimum_homology_basis(const sb_graph *g, sb_basis **out);

/**
 * Checks a computed basis against the brute-force oracle. Writes 1 to
 * `*matches` when the total weights agree exactly. Fails with
 * `SB_ERR_UNSUPPORTED` when the instance is too large to verify.
 *
 * # Safety
 * All pointers must be valid; `homology` selects which basis kind.
 */
sb_status sb_basis_verify(const sb_graph *g, const sb_basis *b, int32_t homology, int32_t *matches);

/**
 * # Safety
 * `b` must be a live basis handle.
 */
void sb_basis_free(sb_basis *b);

/**
 * # Safety
 * `b` must be a live basis handle.
 */
size_t sb_basis_cycle_count(const sb_basis *b);

/**
 * # Safety
 * `b` must be a live basis handle.
 */
double sb_basis_total_weight(const sb_basis *b);

/**
 * Weight of one basis cycle, or NaN when out of range.
 *
 * # Safety
 * `b` must be a live basis handle.
 */
double sb_basis_cycle_weight(const sb_basis *b, size_t index);

/**
 * Number of edges of one basis cycle, or 0 when out of range.
 *
 * # Safety
 * `b` must be a live basis handle.
 */
size_t sb_basis_cycle_edge_count(const sb_basis *b, size_t index);

/**
 * Copies the edge ids of one basis cycle into `buf` and stores the count
 * written in `*written`. Fails with `SB_ERR_ARGUMENT` when the buffer is
 * too small (query the size with [`sb_basis_cycle_edge_count`]).
 *
 * # Safety
 * `buf` must point to at least `buf_len` writable `uint32_t`s.
 */
sb_status sb_basis_cycle_edges(const sb_basis *b,
                               size_t index,
                               uint32_t *buf,
                               size_t buf_len,
                               size_t *written);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SURFACE_BASIS_H */
