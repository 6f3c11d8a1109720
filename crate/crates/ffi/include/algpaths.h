#ifndef ALGPATHS_H
#define ALGPATHS_H

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum AlgpathsStatus {
  ALGPATHS_STATUS_OK = 0,
  ALGPATHS_STATUS_NULL_POINTER = 1,
  ALGPATHS_STATUS_INVALID_ARGUMENT = 2,
  ALGPATHS_STATUS_PARSE_ERROR = 3,
  ALGPATHS_STATUS_NOT_ALGEBRAIC = 4,
  ALGPATHS_STATUS_NUMERICAL_FAILURE = 5,
  ALGPATHS_STATUS_PANIC = 6,
} AlgpathsStatus;

/**
 * A decomposed algebraic element.
 */
typedef struct AlgpathsElement AlgpathsElement;

/**
 * Dense complex matrix.
 */
typedef struct AlgpathsMatrix AlgpathsMatrix;

/**
 * Roots of the polynomial `p`.
 */
typedef struct AlgpathsSpec AlgpathsSpec;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. Valid until the
 * next call into the library on the same thread.
 */
const char *algpaths_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *algpaths_version(void);

/**
 * Roots `re[k] + i·im[k]`; `im` may be null for real roots.
 *
 * # Safety
 * `re` (and `im` when non-null) must point to `n` doubles; `out` must be writable.
 */
enum AlgpathsStatus algpaths_spec_new(const double *re,
                                      const double *im,
                                      size_t n,
                                      bool real_only,
                                      struct AlgpathsSpec **out);

/**
 * Parses a comma-separated root list such as `"0,1+2i,3"`.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be writable.
 */
enum AlgpathsStatus algpaths_spec_parse(const char *text,
                                        bool real_only,
                                        struct AlgpathsSpec **out);

/**
 * # Safety
 * `spec` must come from this library and not be used afterwards.
 */
void algpaths_spec_free(struct AlgpathsSpec *spec);

/**
 * # Safety
 * `spec` must be a live handle; `out` must be writable.
 */
enum AlgpathsStatus algpaths_spec_len(const struct AlgpathsSpec *spec, size_t *out);

/**
 * Lower bound on the distance between distinct self-adjoint components.
 *
 * # Safety
 * `spec` must be a live handle; `out` must be writable.
 */
enum AlgpathsStatus algpaths_separation_bound(const struct AlgpathsSpec *spec, double *out);

/**
 * Exact distance between the self-adjoint components with multiplicities
 * `sig0` and `sig1` (each of length `n`, the number of roots).
 *
 * # Safety
 * `sig0`, `sig1` must point to `n` values; `out` must be writable.
 */
enum AlgpathsStatus algpaths_component_distance(const struct AlgpathsSpec *spec,
                                                const size_t *sig0,
                                                const size_t *sig1,
                                                size_t n,
                                                double *out);

/**
 * Square matrix of size `dim` from row-major `re`/`im` (`im` may be null).
 *
 * # Safety
 * `re` (and `im` when non-null) must point to `dim·dim` doubles; `out` must be writable.
 */
enum AlgpathsStatus algpaths_matrix_new(size_t dim,
                                        const double *re,
                                        const double *im,
                                        struct AlgpathsMatrix **out);

/**
 * # Safety
 * `m` must come from this library and not be used afterwards.
 */
void algpaths_matrix_free(struct AlgpathsMatrix *m);

/**
 * # Safety
 * `m` must be a live handle; `out` must be writable.
 */
enum AlgpathsStatus algpaths_matrix_dim(const struct AlgpathsMatrix *m, size_t *out);

/**
 * Copies the entries row-major into `re`/`im`, each of length `dim·dim`.
 *
 * # Safety
 * `re` and `im` must point to `len` writable doubles.
 */
enum AlgpathsStatus algpaths_matrix_read(const struct AlgpathsMatrix *m,
                                         double *re,
                                         double *im,
                                         size_t len);

/**
 * Spectral decomposition of `m`; `tol` is the base tolerance (0 for the
 * default).
 *
 * # Safety
 * Handles must be live; `out` must be writable.
 */
enum AlgpathsStatus algpaths_decompose(const struct AlgpathsMatrix *m,
                                       const struct AlgpathsSpec *spec,
                                       double tol,
                                       struct AlgpathsElement **out);

/**
 * # Safety
 * `a` must come from this library and not be used afterwards.
 */
void algpaths_element_free(struct AlgpathsElement *a);

/**
 * `||p(a)||` measured at decomposition time.
 *
 * # Safety
 * `a` must be a live handle; `out` must be writable.
 */
enum AlgpathsStatus algpaths_element_residual(const struct AlgpathsElement *a, double *out);

/**
 * New matrix handle holding the idempotent for root `i`.
 *
 * # Safety
 * `a` must be a live handle; `out` must be writable.
 */
enum AlgpathsStatus algpaths_element_idempotent(const struct AlgpathsElement *a,
                                                size_t i,
                                                struct AlgpathsMatrix **out);

/**
 * Writes the multiplicity of each root into `out` (length `n`, the number
 * of roots).
 *
 * # Safety
 * `out` must point to `n` writable values.
 */
enum AlgpathsStatus algpaths_element_signature(const struct AlgpathsElement *a,
                                               size_t *out,
                                               size_t n);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ALGPATHS_H */
