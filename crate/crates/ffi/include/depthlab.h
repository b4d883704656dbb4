#ifndef DEPTHLAB_H
#define DEPTHLAB_H

/* Generated by cbindgen from the depthlab-ffi crate. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum DlDepthKind {
  DL_DEPTH_KIND_EUCLIDEAN = 0,
  DL_DEPTH_KIND_MAHALANOBIS = 1,
  DL_DEPTH_KIND_PROJECTION = 2,
  DL_DEPTH_KIND_TUKEY = 3,
  DL_DEPTH_KIND_ZONOID = 4,
  DL_DEPTH_KIND_LP = 5,
  DL_DEPTH_KIND_LOCAL = 6,
} DlDepthKind;

typedef enum DlStatus {
  DL_STATUS_OK = 0,
  DL_STATUS_NULL_POINTER = 1,
  DL_STATUS_INVALID_ARGUMENT = 2,
  /**
   * Malformed or non-numeric input data.
   */
  DL_STATUS_DATA = 3,
  DL_STATUS_DIMENSION_MISMATCH = 4,
  DL_STATUS_SINGULAR = 5,
  DL_STATUS_DEGENERATE = 6,
  DL_STATUS_IO = 7,
  DL_STATUS_BUFFER_TOO_SMALL = 8,
  DL_STATUS_PANIC = 9,
} DlStatus;

typedef enum DlAlternative {
  DL_ALTERNATIVE_TWO_SIDED = 0,
  DL_ALTERNATIVE_GREATER = 1,
  DL_ALTERNATIVE_LESS = 2,
} DlAlternative;

/**
 * Opaque row-major numeric matrix.
 */
typedef struct DlMatrix DlMatrix;

/**
 * Depth method and tuning parameters; start from [`dl_method_default`].
 */
typedef struct DlMethod {
  enum DlDepthKind kind;
  /**
   * Depth localized when `kind` is `Local`.
   */
  enum DlDepthKind local_base;
  double p;
  double beta;
  size_t nproj;
  uint64_t seed;
  double weight_a;
  double weight_b;
} DlMethod;

/**
 * Simple regression line `y = intercept + slope·x`.
 */
typedef struct DlFit {
  double intercept;
  double slope;
  /**
   * Regression depth of the line on the fitted data.
   */
  double depth;
} DlFit;

typedef struct DlWilcoxon {
  double statistic;
  double p_value;
  double expected;
  double variance;
} DlWilcoxon;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. The pointer is
 * valid until the next failing call on the same thread.
 */
const char *dl_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *dl_version(void);

/**
 * Projection depth with 1000 directions and the default seed.
 */
struct DlMethod dl_method_default(void);

/**
 * Copies `rows × cols` row-major values into a new matrix.
 */
enum DlStatus dl_matrix_new(size_t rows, size_t cols, const double *values, struct DlMatrix **out);

/**
 * Reads a numeric CSV file; `header` non-zero skips the first row.
 */
enum DlStatus dl_matrix_from_csv(const char *path, int32_t header, struct DlMatrix **out);

/**
 * Releases a matrix; null is ignored.
 */
void dl_matrix_free(struct DlMatrix *m);

/**
 * Zero for a null handle.
 */
size_t dl_matrix_rows(const struct DlMatrix *m);

/**
 * Zero for a null handle.
 */
size_t dl_matrix_cols(const struct DlMatrix *m);

/**
 * Copies the values row-major into `out`, which must hold rows × cols.
 */
enum DlStatus dl_matrix_data(const struct DlMatrix *m, double *out, size_t out_len);

/**
 * Depth of every row of `points` w.r.t. `reference`; `out` holds one value
 * per row of `points`.
 */
enum DlStatus dl_depth(const struct DlMatrix *points,
                       const struct DlMatrix *reference,
                       const struct DlMethod *method,
                       double *out,
                       size_t out_len);

/**
 * Deepest point; `out` holds one value per column.
 */
enum DlStatus dl_depth_median(const struct DlMatrix *x,
                              const struct DlMethod *method,
                              double *out,
                              size_t out_len);

enum DlStatus dl_deepest_regression(const double *x, const double *y, size_t n, struct DlFit *out);

/**
 * Least squares on the observations whose projection depth of (x, y)
 * exceeds the `alpha` depth quantile.
 */
enum DlStatus dl_trim_proj_reg(const double *x,
                               const double *y,
                               size_t n,
                               double alpha,
                               const struct DlMethod *method,
                               struct DlFit *out);

enum DlStatus dl_wilcoxon(const struct DlMatrix *x,
                          const struct DlMatrix *y,
                          const struct DlMethod *method,
                          enum DlAlternative alternative,
                          struct DlWilcoxon *out);

/**
 * L^p depth weighted location (d values) and scatter (d×d, row-major).
 */
enum DlStatus dl_cov_lp(const struct DlMatrix *x,
                        double p,
                        double a,
                        double b,
                        double *location,
                        size_t location_len,
                        double *scatter,
                        size_t scatter_len);

/**
 * Student median of a univariate sample.
 */
enum DlStatus dl_ls_max_depth(const double *y,
                              size_t n,
                              double nu,
                              double *mu,
                              double *sigma,
                              double *depth);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DEPTHLAB_H */
