#ifndef NBC_H
#define NBC_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

/* Pass as `truncate` to nbc_complex_new to keep the full graphic matroid. */
#define NBC_NO_TRUNCATION SIZE_MAX



typedef enum NbcStatus {
  NBC_STATUS_OK = 0,
  NBC_STATUS_NULL = 1,
  NBC_STATUS_INVALID = 2,
  NBC_STATUS_PRECONDITION = 3,
  NBC_STATUS_SIZE_GUARD = 4,
  NBC_STATUS_BUFFER_TOO_SMALL = 5,
  NBC_STATUS_PANIC = 6,
} NbcStatus;

typedef struct NbcComplex NbcComplex;

typedef struct NbcGraph NbcGraph;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *nbc_version(void);

/**
 * Copies the calling thread's last error message (NUL-terminated) into
 * `buf`. `needed` receives the size including the terminator.
 *
 * # Safety
 * `buf` must be null or hold `cap` bytes; `needed` must be writable.
 */
enum NbcStatus nbc_last_error_message(char *buf, size_t cap, size_t *needed);

/**
 * `edges` holds `edge_count` pairs as `2·edge_count` vertex ids.
 *
 * # Safety
 * `edges` must hold `2 * edge_count` values; `out` must be writable.
 */
enum NbcStatus nbc_graph_new(size_t vertices,
                             const size_t *edges,
                             size_t edge_count,
                             struct NbcGraph **out);

/**
 * Builds a generator graph such as `"complete:4"` or `"bipartite:2:3"`.
 *
 * # Safety
 * `spec` must be a NUL-terminated string; `out` must be writable.
 */
enum NbcStatus nbc_graph_named(const char *spec, struct NbcGraph **out);

/**
 * # Safety
 * `g` must be null or a handle from this library, freed at most once.
 */
void nbc_graph_free(struct NbcGraph *g);

/**
 * # Safety
 * `g` must be a live handle; the out pointers must be writable.
 */
enum NbcStatus nbc_graph_size(const struct NbcGraph *g, size_t *vertices, size_t *edges);

/**
 * NBC complex of the graph's matroid, optionally truncated. `order` is a
 * ranking of edge ids, smallest first; null means the identity.
 *
 * # Safety
 * `g` must be a live handle; `order` must be null or hold `order_len`
 * values; `out` must be writable.
 */
enum NbcStatus nbc_complex_new(const struct NbcGraph *g,
                               const size_t *order,
                               size_t order_len,
                               size_t truncate,
                               struct NbcComplex **out);

/**
 * # Safety
 * `c` must be null or a handle from this library, freed at most once.
 */
void nbc_complex_free(struct NbcComplex *c);

/**
 * # Safety
 * `c` must be a live handle; `out` must be writable.
 */
enum NbcStatus nbc_complex_rank(const struct NbcComplex *c, size_t *out);

/**
 * Face numbers `n_0 .. n_rank`.
 *
 * # Safety
 * `c` must be a live handle; `out` must hold `cap` values; `len` must be
 * writable.
 */
enum NbcStatus nbc_face_numbers(const struct NbcComplex *c,
                                bool force,
                                uint64_t *out,
                                size_t cap,
                                size_t *len);

/**
 * # Safety
 * `c` must be a live handle; `set` must hold `len` values; `out` must be
 * writable.
 */
enum NbcStatus nbc_is_nbc(const struct NbcComplex *c, const size_t *set, size_t len, bool *out);

/**
 * # Safety
 * `c` must be a live handle; `out` must be writable.
 */
enum NbcStatus nbc_count_bases(const struct NbcComplex *c, bool force, uint64_t *out);

/**
 * Spectral gap of the down-up walk on NBC bases.
 *
 * # Safety
 * `c` must be a live handle; `out` must be writable.
 */
enum NbcStatus nbc_down_up_gap(const struct NbcComplex *c, bool force, double *out);

/**
 * `γ_0 .. γ_{rank−2}` of the NBC complex.
 *
 * # Safety
 * `c` must be a live handle; `out` must hold `cap` values; `len` must be
 * writable.
 */
enum NbcStatus nbc_local_profile(const struct NbcComplex *c,
                                 bool force,
                                 double *out,
                                 size_t cap,
                                 size_t *len);

/**
 * Chromatic polynomial coefficients, constant term first.
 *
 * # Safety
 * `g` must be a live handle; `out` must hold `cap` values; `len` must be
 * writable.
 */
enum NbcStatus nbc_chromatic_polynomial(const struct NbcGraph *g,
                                        bool force,
                                        int64_t *out,
                                        size_t cap,
                                        size_t *len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* NBC_H */
