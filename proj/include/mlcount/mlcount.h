// Copyright 2026 The mlcount Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#ifndef MLCOUNT_MLCOUNT_H_
#define MLCOUNT_MLCOUNT_H_

/*
 * Disk counting statistics of the Mittag-Leffler point process: exact
 * finite-n moment generating functions and cumulants, large-n expansion
 * coefficients, Monte Carlo sampling and verification experiments.
 *
 * Conventions: every function returns an mlc_status. Outputs are written
 * through pointers only on MLC_OK. On failure a message is kept in the
 * context (mlc_context_last_error). Array outputs take a capacity in
 * elements; too small a capacity yields MLC_ERR_BUFFER.
 *
 * A context may be used by one thread at a time; distinct contexts are
 * independent. Disk and batch handles are immutable once passed to a
 * computation and may be shared.
 */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(MLCOUNT_BUILDING_LIBRARY)
#define MLC_API __declspec(dllexport)
#else
#define MLC_API __declspec(dllimport)
#endif
#else
#define MLC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mlc_status {
  MLC_OK = 0,
  MLC_ERR_NULL = 1,         /* required pointer argument was NULL */
  MLC_ERR_DOMAIN = 2,       /* argument outside the function's domain */
  MLC_ERR_CONFIG = 3,       /* invalid ensemble or disk configuration */
  MLC_ERR_ORDER = 4,        /* cumulant order above the supported maximum */
  MLC_ERR_INSUFFICIENT = 5, /* too few samples / n-values */
  MLC_ERR_NUMERIC = 6,      /* internal numerical fault */
  MLC_ERR_BUFFER = 7,       /* output capacity too small */
  MLC_ERR_INTERNAL = 8
} mlc_status;

typedef enum mlc_regime { MLC_BULK = 0, MLC_EDGE = 1, MLC_OUTSIDE = 2 } mlc_regime;

typedef enum mlc_gamma_regime {
  MLC_GAMMA_SERIES = 0,
  MLC_GAMMA_CONTINUED_FRACTION = 1,
  MLC_GAMMA_TEMME = 2,
  MLC_GAMMA_LARGE_Z = 3
} mlc_gamma_regime;

typedef struct mlc_context mlc_context;
typedef struct mlc_disks mlc_disks;
typedef struct mlc_batch mlc_batch;

typedef struct mlc_ensemble {
  double b;
  double alpha;
  int64_t n;
} mlc_ensemble;

MLC_API const char* mlc_version(void);
MLC_API const char* mlc_status_string(mlc_status status);
MLC_API const char* mlc_regime_name(int regime);
MLC_API const char* mlc_gamma_regime_name(int regime);

/* ---- context ---------------------------------------------------------- */

MLC_API mlc_status mlc_context_create(mlc_context** out);
MLC_API void mlc_context_destroy(mlc_context* ctx);
/* 0 = one worker per hardware thread. */
MLC_API mlc_status mlc_context_set_threads(mlc_context* ctx, unsigned threads);
MLC_API mlc_status mlc_context_set_quadrature(mlc_context* ctx, double abs_tol, int max_intervals);
MLC_API const char* mlc_context_last_error(const mlc_context* ctx);

/* ---- special functions ------------------------------------------------ */

MLC_API mlc_status mlc_erfc(mlc_context* ctx, double t, double* out);
MLC_API mlc_status mlc_log_gamma(mlc_context* ctx, double x, double* out);
/* P(a, z); regime may be NULL. */
MLC_API mlc_status mlc_reg_lower_gamma(mlc_context* ctx, double a, double z, double* out, int* regime);
MLC_API mlc_status mlc_eta_of_lambda(mlc_context* ctx, double lambda, double* eta);
MLC_API mlc_status mlc_temme_R(mlc_context* ctx, double a, double lambda, double* out);
MLC_API mlc_status mlc_log_barnes_g(mlc_context* ctx, double z, double* out);

/* ---- disk systems ----------------------------------------------------- */

MLC_API mlc_status mlc_disks_create(mlc_disks** out);
MLC_API void mlc_disks_destroy(mlc_disks* disks);
MLC_API mlc_status mlc_disks_add_fixed(mlc_disks* disks, double r, double u);
/* Edge disk of radius b^{-1/(2b)} (1 + sqrt(2b) s / sqrt(n))^{1/(2b)}. */
MLC_API mlc_status mlc_disks_add_edge(mlc_disks* disks, double s, double u);
MLC_API mlc_status mlc_disks_count(const mlc_disks* disks, size_t* out);
MLC_API mlc_status mlc_disks_set_weights(mlc_disks* disks, const double* u, size_t count);
MLC_API mlc_status mlc_disks_resolve(mlc_context* ctx, const mlc_disks* disks, const mlc_ensemble* ens, double* radii,
                                     size_t capacity);
/* regimes[i] is an mlc_regime; r_or_s[i] the radius (bulk/outside) or s (edge). */
MLC_API mlc_status mlc_disks_classify(mlc_context* ctx, const mlc_disks* disks, double b, int* regimes,
                                      double* r_or_s, size_t capacity);

/* ---- exact finite-n engine -------------------------------------------- */

MLC_API mlc_status mlc_log_mgf_exact(mlc_context* ctx, const mlc_ensemble* ens, const mlc_disks* disks, double* out);
MLC_API mlc_status mlc_log_partition_exact(mlc_context* ctx, const mlc_ensemble* ens, double* out);
/* P[j][l] row-major, n x p. */
MLC_API mlc_status mlc_bernoulli_profile(mlc_context* ctx, const mlc_ensemble* ens, const mlc_disks* disks, double* P,
                                         size_t capacity);
/* orders: count multi-indices of length p, row-major; total order <= 6. */
MLC_API mlc_status mlc_joint_cumulants_exact(mlc_context* ctx, const mlc_ensemble* ens, const mlc_disks* disks,
                                             const int* orders, size_t count, double* out);
/* means: p entries, covariance: p x p row-major. */
MLC_API mlc_status mlc_mean_var_exact(mlc_context* ctx, const mlc_ensemble* ens, const mlc_disks* disks, double* means,
                                      double* covariance, size_t p);

/* ---- asymptotics ------------------------------------------------------ */

typedef struct mlc_coefficients {
  double C1, C2, C3, C4;
  double quad_error;
  int edge_extreme; /* |s| > 6: Gaussian factors underflow */
} mlc_coefficients;

typedef struct mlc_disk_term {
  int regime;
  double r_or_s;
  double C1, C2, C3, C4;
  double quad_error;
} mlc_disk_term;

typedef struct mlc_cumulant_series {
  int regime;
  int order;
  double leading, c, d, e;
  double quad_error;
} mlc_cumulant_series;

typedef struct mlc_zn {
  int64_t n;
  int has_constant;
  int n1, n2;
  double constant;
  double exact;
  double expansion;
  double residual; /* from extended-precision exact and expansion */
} mlc_zn;

MLC_API mlc_status mlc_F(mlc_context* ctx, double t, double s, double* out);
MLC_API mlc_status mlc_G(mlc_context* ctx, double t, double s, double* out);
/* per_disk may be NULL; otherwise needs capacity >= disk count. */
MLC_API mlc_status mlc_theorem_coefficients(mlc_context* ctx, double b, double alpha, const mlc_disks* disks,
                                            mlc_coefficients* out, mlc_disk_term* per_disk, size_t capacity);
MLC_API mlc_status mlc_predict_log_mgf(mlc_context* ctx, const mlc_ensemble* ens, const mlc_disks* disks, double* out);
/* regime selects bulk (r_or_s = r), edge (r_or_s = s) or outside. */
MLC_API mlc_status mlc_cumulant_coeffs(mlc_context* ctx, int regime, int order, double b, double alpha, double r_or_s,
                                       mlc_cumulant_series* out);
MLC_API mlc_status mlc_edge_closed_form(mlc_context* ctx, int order, double b, double alpha, double s,
                                        mlc_cumulant_series* out);
MLC_API mlc_status mlc_zn_expansion(mlc_context* ctx, const mlc_ensemble* ens, int rational_cap, int require_constant,
                                    mlc_zn* out);

/* ---- Monte Carlo ------------------------------------------------------ */

typedef struct mlc_kstat {
  int order;
  double value;
  double std_error;
} mlc_kstat;

MLC_API mlc_status mlc_sample_counts(mlc_context* ctx, const mlc_ensemble* ens, const mlc_disks* disks,
                                     size_t num_samples, uint64_t seed, mlc_batch** out);
MLC_API void mlc_batch_destroy(mlc_batch* batch);
MLC_API mlc_status mlc_batch_shape(const mlc_batch* batch, size_t* num_samples, size_t* p);
MLC_API mlc_status mlc_batch_counts(const mlc_batch* batch, int64_t* out, size_t capacity);
MLC_API mlc_status mlc_batch_radii(const mlc_batch* batch, double* out, size_t capacity);
/* k-statistics of orders 1..max_order (<= 4) for one disk; out has max_order entries. */
MLC_API mlc_status mlc_batch_cumulants(mlc_context* ctx, const mlc_batch* batch, size_t disk, int max_order,
                                       mlc_kstat* out);
/* n |z_j|^{2b}, num_samples x n row-major. */
MLC_API mlc_status mlc_sample_scaled_moduli(mlc_context* ctx, const mlc_ensemble* ens, size_t num_samples,
                                            uint64_t seed, double* out, size_t capacity);

/* ---- verification experiments ----------------------------------------- */

typedef struct mlc_residual_point {
  int64_t n;
  double exact, predicted, residual, noise;
  int used;
} mlc_residual_point;

typedef struct mlc_residual_summary {
  double fitted_rate; /* NaN when fewer than two points clear the noise floor */
  double fitted_K;
  double quad_error;
  double last_ratio;
  int monotone;
  int pass;
} mlc_residual_summary;

typedef struct mlc_fit {
  double fitted[4];
  double theorem[4];
  double deviation[4];
  double condition;
} mlc_fit;

typedef struct mlc_clt_summary {
  int64_t n;
  size_t num_samples;
  uint64_t seed;
  size_t dim;
  double max_deviation;
  int pass;
} mlc_clt_summary;

/* points has count entries. Pass = rate in [rate_lo, rate_hi] and |r| decreasing. */
MLC_API mlc_status mlc_residual_scan(mlc_context* ctx, double b, double alpha, const mlc_disks* disks,
                                     const int64_t* n_values, size_t count, double rate_lo, double rate_hi,
                                     mlc_residual_point* points, mlc_residual_summary* summary);
MLC_API mlc_status mlc_coefficient_fit(mlc_context* ctx, double b, double alpha, const mlc_disks* disks,
                                       const int64_t* n_values, size_t count, mlc_fit* out);
/* means: dim entries; covariance: dim x dim; dim = m + (has_edge ? 1 : 0). */
MLC_API mlc_status mlc_clt_experiment(mlc_context* ctx, double b, double alpha, const double* bulk_radii, size_t m,
                                      int has_edge, double s, int64_t n, size_t num_samples, uint64_t seed,
                                      double tolerance, double* means, double* covariance, size_t dim_capacity,
                                      mlc_clt_summary* summary);

#ifdef __cplusplus
}
#endif

#endif /* MLCOUNT_MLCOUNT_H_ */
