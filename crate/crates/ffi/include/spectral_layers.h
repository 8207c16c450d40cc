#ifndef SPECTRAL_LAYERS_H
#define SPECTRAL_LAYERS_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SlStatus {
  SL_STATUS_OK = 0,
  SL_STATUS_NULL_POINTER = 1,
  SL_STATUS_INVALID_UTF8 = 2,
  SL_STATUS_BUFFER_TOO_SMALL = 3,
  SL_STATUS_INVALID_SEQUENCE = 4,
  SL_STATUS_INVALID_GRAPH = 5,
  SL_STATUS_PARSE = 6,
  SL_STATUS_OUT_OF_RANGE = 7,
  SL_STATUS_ZERO_DEGREE = 8,
  SL_STATUS_OVERFLOW = 9,
  SL_STATUS_NUMERICAL_FAILURE = 10,
  SL_STATUS_NOT_ANTITREE = 11,
  SL_STATUS_INVALID_ARGUMENT = 12,
  SL_STATUS_PANIC = 13,
} SlStatus;

typedef enum SlOperatorKind {
  SL_OPERATOR_KIND_ADJACENCY = 0,
  SL_OPERATOR_KIND_LAPLACIAN = 1,
  SL_OPERATOR_KIND_NORMALIZED = 2,
} SlOperatorKind;

// Verification properties accepted by [`sl_graph_check`].
typedef enum SlCheck {
  SL_CHECK_PATH_COMMUTING = 0,
  SL_CHECK_STRONGLY_PATH_COMMUTING = 1,
  SL_CHECK_SPHERICALLY_SYMMETRIC = 2,
  SL_CHECK_FAMILY_PRESERVING = 3,
} SlCheck;

// Opaque list of Jacobi blocks.
typedef struct SlDecomposition SlDecomposition;

// Opaque rooted layered graph.
typedef struct SlGraph SlGraph;

typedef struct SlBlockInfo {
  size_t start_sphere;
  // Length of the diagonal; the off-diagonal has `len - 1` entries.
  size_t len;
  uint64_t multiplicity;
} SlBlockInfo;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or null after a
// successful one. Valid until the next `sl_*` call on the same thread.
const char *sl_last_error_message(void);

// Antitree ball of radius `depth` with sphere sizes `spec`
// (`"prefix;tail"`, e.g. `"1;2,3"`).
//
// # Safety
// `spec` must be a NUL-terminated string; `out` must be writable.
enum SlStatus sl_graph_antitree(const char *spec, size_t depth, struct SlGraph **out);

// Tree with complete spheres: branching `k`, complete-sphere bits `gamma`.
//
// # Safety
// `k` and `gamma` must be NUL-terminated strings; `out` must be writable.
enum SlStatus sl_graph_tree_cs(const char *k,
                               const char *gamma,
                               size_t depth,
                               struct SlGraph **out);

// Parses layered-graph text.
//
// # Safety
// `text` must be a NUL-terminated string; `out` must be writable.
enum SlStatus sl_graph_from_lgf(const char *text, struct SlGraph **out);

// # Safety
// `g` must be null or a handle from this library not yet freed.
void sl_graph_free(struct SlGraph *g);

// Number of vertices in the ball, 0 for a null handle.
//
// # Safety
// `g` must be null or a live graph handle.
size_t sl_graph_vertex_count(const struct SlGraph *g);

// Radius of the ball, 0 for a null handle.
//
// # Safety
// `g` must be null or a live graph handle.
size_t sl_graph_depth(const struct SlGraph *g);

// Serializes the graph; release the string with [`sl_string_free`].
//
// # Safety
// `g` must be a live graph handle; `out` must be writable.
enum SlStatus sl_graph_to_lgf(const struct SlGraph *g, char **out);

// # Safety
// `s` must be null or a string returned by this library not yet freed.
void sl_string_free(char *s);

// Writes the compressed operator as a row-major `n x n` matrix,
// `n = sl_graph_vertex_count(g)`. `written` receives `n * n`.
//
// # Safety
// `g` must be a live graph handle; `buf` must hold `len` doubles;
// `written` may be null.
enum SlStatus sl_graph_compress(const struct SlGraph *g,
                                enum SlOperatorKind kind,
                                double *buf,
                                size_t len,
                                size_t *written);

// Ascending eigenvalues of the compressed operator by dense eigensolve.
//
// # Safety
// As for [`sl_graph_compress`].
enum SlStatus sl_graph_eigenvalues(const struct SlGraph *g,
                                   enum SlOperatorKind kind,
                                   double *buf,
                                   size_t len,
                                   size_t *written);

// Runs one verification. `n_max` and `k_max` bound the path-count checks
// and `n_max` the family-preserving check; both are clamped to the depth.
//
// # Safety
// `g` must be a live graph handle; `passed` must be writable.
enum SlStatus sl_graph_check(const struct SlGraph *g,
                             enum SlCheck check,
                             size_t n_max,
                             size_t k_max,
                             bool *passed);

// Generic tridiagonalization of the compressed operator.
//
// # Safety
// `g` must be a live graph handle; `out` must be writable.
enum SlStatus sl_graph_decompose(const struct SlGraph *g,
                                 enum SlOperatorKind kind,
                                 double tol,
                                 struct SlDecomposition **out);

// Closed-form antitree decomposition.
//
// # Safety
// `spec` must be a NUL-terminated string; `out` must be writable.
enum SlStatus sl_closed_form_antitree(const char *spec,
                                      size_t depth,
                                      enum SlOperatorKind kind,
                                      struct SlDecomposition **out);

// Closed-form Laplacian decomposition of a tree with complete spheres.
//
// # Safety
// `k` and `gamma` must be NUL-terminated strings; `out` must be writable.
enum SlStatus sl_closed_form_tree_cs(const char *k,
                                     const char *gamma,
                                     size_t depth,
                                     struct SlDecomposition **out);

// # Safety
// `d` must be null or a handle from this library not yet freed.
void sl_decomposition_free(struct SlDecomposition *d);

// Number of distinct blocks, 0 for a null handle.
//
// # Safety
// `d` must be null or a live decomposition handle.
size_t sl_decomposition_block_count(const struct SlDecomposition *d);

// # Safety
// `d` must be a live decomposition handle; `info` must be writable.
enum SlStatus sl_decomposition_block(const struct SlDecomposition *d,
                                     size_t index,
                                     struct SlBlockInfo *info);

// Copies the off-diagonal `a` (`len - 1` values) and diagonal `b`
// (`len` values) of one block.
//
// # Safety
// `d` must be a live decomposition handle; `a` must hold `a_len` and
// `b` `b_len` doubles.
enum SlStatus sl_decomposition_block_coefficients(const struct SlDecomposition *d,
                                                  size_t index,
                                                  double *a,
                                                  size_t a_len,
                                                  double *b,
                                                  size_t b_len);

// Ascending eigenvalues of all blocks, each repeated by its multiplicity.
//
// # Safety
// `d` must be a live decomposition handle; `buf` must hold `len` doubles;
// `written` may be null.
enum SlStatus sl_decomposition_spectrum(const struct SlDecomposition *d,
                                        double tol,
                                        double *buf,
                                        size_t len,
                                        size_t *written);

// Compares two decompositions up to block order, grouping and signs.
//
// # Safety
// `d1` and `d2` must be live handles; `passed` must be writable;
// `max_deviation` may be null.
enum SlStatus sl_reconcile(const struct SlDecomposition *d1,
                           const struct SlDecomposition *d2,
                           double tol,
                           bool *passed,
                           double *max_deviation);

// Eigenvalues of the Jacobi matrix with diagonal `b[0..n]` and
// off-diagonal `a[0..n-1]` by Sturm bisection, written to `out[0..n]`.
//
// # Safety
// `b` and `out` must hold `n` doubles, `a` `n - 1` (may be null if
// `n <= 1`).
enum SlStatus sl_tridiagonal_eigenvalues(const double *b,
                                         const double *a,
                                         size_t n,
                                         double tol,
                                         double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SPECTRAL_LAYERS_H */
