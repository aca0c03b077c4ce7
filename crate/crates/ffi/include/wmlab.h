#ifndef WMLAB_H
#define WMLAB_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum {
  WMLAB_STATUS_OK = 0,
  WMLAB_STATUS_NULL_POINTER = 1,
  WMLAB_STATUS_INVALID_PARAMETER = 2,
  WMLAB_STATUS_LENGTH_MISMATCH = 3,
  WMLAB_STATUS_NON_POSITIVE_INPUT = 4,
  WMLAB_STATUS_TOO_LARGE = 5,
  WMLAB_STATUS_HYPOTHESIS_FAILED = 6,
  WMLAB_STATUS_PANIC = 99,
} WmlabStatus;

typedef enum {
  WMLAB_CERTIFICATE_BENNETT = 0,
  WMLAB_CERTIFICATE_IMPROVED = 1,
} WmlabCertificate;

/**
 * Opaque weight sequence.
 */
typedef struct WmlabWeights WmlabWeights;

typedef struct {
  /**
   * `||A||^p` for `p > 1`, the supremum for `p < 0`.
   */
  double mu;
  double norm;
  double kkt_residual;
  size_t iterations;
  bool converged;
} WmlabNormResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copies the last error message of this thread into `buf` (NUL-terminated,
 * truncated to `len`) and returns the full message length in bytes,
 * excluding the terminator. `buf` may be null to query the length.
 *
 * # Safety
 * `buf` must be null or point to `len` writable bytes.
 */
size_t wmlab_last_error_message(char *buf, size_t len);

/**
 * Weights from `len` strictly positive values.
 *
 * # Safety
 * `values` must point to `len` readable doubles; `out` must be writable.
 */
WmlabStatus wmlab_weights_new(const double *values, size_t len, WmlabWeights **out);

/**
 * `λ_n = n^α`, `n = 1..N`.
 *
 * # Safety
 * `out` must be writable.
 */
WmlabStatus wmlab_weights_power(double alpha, size_t n, WmlabWeights **out);

/**
 * Releases a handle; null is ignored.
 *
 * # Safety
 * `w` must be null or a handle from this library not yet freed.
 */
void wmlab_weights_free(WmlabWeights *w);

/**
 * # Safety
 * `w` must be a live handle; `out` must be writable.
 */
WmlabStatus wmlab_weights_len(const WmlabWeights *w, size_t *out);

/**
 * Finite-section norm (`p > 1`) or negative-exponent supremum (`p < 0`)
 * with default solver settings and the given seed. When `maximizer` is not
 * null it receives the maximizing sequence and `maximizer_len` must equal
 * the section length.
 *
 * # Safety
 * `w` must be a live handle, `out` writable, and `maximizer` null or
 * pointing to `maximizer_len` writable doubles.
 */
WmlabStatus wmlab_operator_norm(const WmlabWeights *w,
                                double p,
                                uint64_t seed,
                                WmlabNormResult *out,
                                double *maximizer,
                                size_t maximizer_len);

/**
 * Cartlidge constant `L`, whether `L < p` holds, and the implied bound
 * `(p/(p-L))^p` on `μ` (NaN when the condition fails).
 *
 * # Safety
 * `w` must be a live handle; the out pointers must be writable.
 */
WmlabStatus wmlab_cartlidge(const WmlabWeights *w,
                            double p,
                            double *out_l,
                            bool *out_holds,
                            double *out_bound);

/**
 * The mean `L_r(a, b)`.
 *
 * # Safety
 * `out` must be writable.
 */
WmlabStatus wmlab_generalized_mean(double a, double b, double r, double *out);

/**
 * Best constant of the continuous Bliss-type inequality.
 *
 * # Safety
 * `out` must be writable.
 */
WmlabStatus wmlab_bliss_constant(double r, double s, double alpha, double *out);

/**
 * Builds and verifies a Schur certificate for the `N × N` section; writes
 * whether both inequality families hold and the certified norm bound.
 *
 * # Safety
 * The out pointers must be writable.
 */
WmlabStatus wmlab_verify_certificate(WmlabCertificate variant,
                                     double alpha,
                                     double p,
                                     size_t n,
                                     bool *out_holds,
                                     double *out_bound);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* WMLAB_H */
