#ifndef MULTIJET_H
#define MULTIJET_H

/* Generated with cbindgen:0.29.4 */

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum MjStatus {
  MJ_STATUS_OK = 0,
  MJ_STATUS_NULL_POINTER = 1,
  MJ_STATUS_INVALID_INPUT = 2,
  MJ_STATUS_DIMENSION_MISMATCH = 3,
  MJ_STATUS_INSUFFICIENT_SMOOTHNESS = 4,
  MJ_STATUS_RANK_DEFICIENT = 5,
  MJ_STATUS_DEGENERATE_CONDITIONING = 6,
  MJ_STATUS_NOT_PSD = 7,
  MJ_STATUS_ORDER_EXCEEDED = 8,
  MJ_STATUS_BUFFER_TOO_SMALL = 9,
  MJ_STATUS_PANIC = 10,
} MjStatus;

/**
 * A covariance kernel.
 */
typedef struct MjKernel MjKernel;

/**
 * A polynomial in graded-lex coefficient order.
 */
typedef struct MjPoly MjPoly;

/**
 * A linear subspace held by an orthonormal basis.
 */
typedef struct MjSubspace MjSubspace;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *mj_version(void);

/**
 * Message for the last failed call on this thread ("" after a success).
 * The pointer stays valid until the next `mj_*` call on the same thread.
 */
const char *mj_last_error(void);

/**
 * Kernel from its JSON form, e.g. `{"name": "bargmann_fock", "n": 2}`.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a writable pointer.
 */
enum MjStatus mj_kernel_from_json(const char *json, struct MjKernel **out);

/**
 * # Safety
 * `k` must come from `mj_kernel_from_json` and not be used afterwards.
 */
void mj_kernel_free(struct MjKernel *k);

/**
 * Kergin interpolant of a registry function given as JSON
 * (`{"id": "sin"}`, `{"poly": …}` or `{"ridge": …}`) at `p` points of ℝⁿ.
 *
 * # Safety
 * `function` is NUL-terminated, `points` holds `p·n` doubles, `out` is writable.
 */
enum MjStatus mj_kergin(const char *function,
                        const double *points,
                        size_t p,
                        size_t n,
                        struct MjPoly **out);

/**
 * Number of variables, or 0 for a null handle.
 *
 * # Safety
 * `poly` is null or a live handle.
 */
size_t mj_poly_nvars(const struct MjPoly *poly);

/**
 * Graded-lex coefficients; call with `*len` = 0 to query the length.
 *
 * # Safety
 * `poly` is a live handle, `buf` holds `*len` doubles (or is null), `len` is writable.
 */
enum MjStatus mj_poly_coeffs(const struct MjPoly *poly, double *buf, size_t *len);

/**
 * Value at x ∈ ℝⁿ.
 *
 * # Safety
 * `poly` is a live handle, `x` holds `n` doubles, `out` is writable.
 */
enum MjStatus mj_poly_eval(const struct MjPoly *poly, const double *x, size_t n, double *out);

/**
 * # Safety
 * `poly` must come from this library and not be used afterwards.
 */
void mj_poly_free(struct MjPoly *poly);

/**
 * Kernel of the evaluation map at `p` distinct points, inside the
 * polynomials of degree ≤ p − 1.
 *
 * # Safety
 * `points` holds `p·n` doubles and `out` is writable.
 */
enum MjStatus mj_ev_kernel(const double *points, size_t p, size_t n, struct MjSubspace **out);

/**
 * (ambient dimension, subspace dimension); zeros for a null handle.
 *
 * # Safety
 * `s` is null or a live handle; the out pointers are writable or null.
 */
void mj_subspace_dims(const struct MjSubspace *s, size_t *ambient, size_t *dim);

/**
 * Orthonormal basis, column-major (ambient × dim).
 *
 * # Safety
 * As for `mj_poly_coeffs`.
 */
enum MjStatus mj_subspace_basis(const struct MjSubspace *s, double *buf, size_t *len);

/**
 * Largest principal angle between two subspaces of equal dimensions.
 *
 * # Safety
 * `a`, `b` are live handles and `out` is writable.
 */
enum MjStatus mj_subspace_angle(const struct MjSubspace *a,
                                const struct MjSubspace *b,
                                double *out);

/**
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void mj_subspace_free(struct MjSubspace *s);

/**
 * One-point Kac–Rice density of r iid copies of the field at x.
 * `std_error` is 0 when a closed form applies.
 *
 * # Safety
 * `kernel` is live, `x` holds the kernel's n doubles, out pointers are writable.
 */
enum MjStatus mj_rho1(const struct MjKernel *kernel,
                      size_t r,
                      const double *x,
                      size_t samples,
                      uint64_t seed,
                      double *value,
                      double *std_error);

/**
 * p-point Kac–Rice density at a configuration of distinct points.
 *
 * # Safety
 * `kernel` is live, `points` holds `p·n` doubles, out pointers are writable.
 */
enum MjStatus mj_rho_p(const struct MjKernel *kernel,
                       size_t r,
                       const double *points,
                       size_t p,
                       size_t samples,
                       uint64_t seed,
                       double *value,
                       double *std_error);

/**
 * Smallest eigenvalue of the q-jet covariance and whether it certifies
 * q-non-degeneracy.
 *
 * # Safety
 * `kernel` is live and out pointers are writable.
 */
enum MjStatus mj_nondeg(const struct MjKernel *kernel,
                        size_t q,
                        double *min_eigenvalue,
                        bool *certified);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MULTIJET_H */
