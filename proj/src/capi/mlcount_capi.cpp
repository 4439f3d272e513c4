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
#include "mlcount/mlcount.h"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <new>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "asymptotics.hpp"
#include "ensemble.hpp"
#include "error.hpp"
#include "exact.hpp"
#include "sampler.hpp"
#include "specfun.hpp"
#include "verify.hpp"

struct mlc_context {
  mlcount::Parallelism par;
  mlcount::quadrature::Options quad = mlcount::asymptotics::default_quadrature();
  std::string last_error;
};

struct mlc_disks {
  mlcount::DiskSystem system;
};

struct mlc_batch {
  mlcount::sampler::SampleBatch batch;
};

namespace {

using namespace mlcount;

struct NullArgument : Error {
  using Error::Error;
};
struct BufferTooSmall : Error {
  using Error::Error;
};

template <class... T>
void require(const T*... ptrs) {
  if (((ptrs == nullptr) || ...)) throw NullArgument("required pointer argument is NULL");
}

void require_capacity(std::size_t have, std::size_t need) {
  if (have < need) {
    throw BufferTooSmall("output capacity " + std::to_string(have) + " is below the required " + std::to_string(need));
  }
}

template <class F>
mlc_status guarded(mlc_context* ctx, F&& body) {
  if (ctx == nullptr) return MLC_ERR_NULL;
  mlc_status status = MLC_OK;
  try {
    body();
    ctx->last_error.clear();
    return MLC_OK;
  } catch (const NullArgument& e) {
    status = MLC_ERR_NULL;
    ctx->last_error = e.what();
  } catch (const BufferTooSmall& e) {
    status = MLC_ERR_BUFFER;
    ctx->last_error = e.what();
  } catch (const DomainError& e) {
    status = MLC_ERR_DOMAIN;
    ctx->last_error = e.what();
  } catch (const ConfigError& e) {
    status = MLC_ERR_CONFIG;
    ctx->last_error = e.what();
  } catch (const OrderError& e) {
    status = MLC_ERR_ORDER;
    ctx->last_error = e.what();
  } catch (const InsufficientDataError& e) {
    status = MLC_ERR_INSUFFICIENT;
    ctx->last_error = e.what();
  } catch (const NumericalFault& e) {
    status = MLC_ERR_NUMERIC;
    ctx->last_error = e.what();
  } catch (const std::bad_alloc&) {
    status = MLC_ERR_INTERNAL;
    ctx->last_error = "out of memory";
  } catch (const std::exception& e) {
    status = MLC_ERR_INTERNAL;
    ctx->last_error = e.what();
  } catch (...) {
    status = MLC_ERR_INTERNAL;
    ctx->last_error = "unknown failure";
  }
  return status;
}

EnsembleParams params_of(const mlc_ensemble* ens) {
  require(ens);
  EnsembleParams p{ens->b, ens->alpha, ens->n};
  p.validate();
  return p;
}

int regime_code(DiskRegime r) {
  switch (r) {
    case DiskRegime::Bulk:
      return MLC_BULK;
    case DiskRegime::Edge:
      return MLC_EDGE;
    case DiskRegime::Outside:
      return MLC_OUTSIDE;
  }
  return MLC_BULK;
}

int gamma_code(specfun::GammaRegime r) {
  switch (r) {
    case specfun::GammaRegime::SeriesSmallZ:
      return MLC_GAMMA_SERIES;
    case specfun::GammaRegime::ContinuedFraction:
      return MLC_GAMMA_CONTINUED_FRACTION;
    case specfun::GammaRegime::TemmeUniform:
      return MLC_GAMMA_TEMME;
    case specfun::GammaRegime::FixedALargeZ:
      return MLC_GAMMA_LARGE_Z;
  }
  return MLC_GAMMA_SERIES;
}

mlc_cumulant_series to_c(const asymptotics::CumulantSeries& s) {
  return {regime_code(s.regime), s.order, s.leading, s.c, s.d, s.e, s.quad_error};
}

}  // namespace

extern "C" {

const char* mlc_version(void) { return "1.0.0"; }

const char* mlc_status_string(mlc_status status) {
  switch (status) {
    case MLC_OK:
      return "ok";
    case MLC_ERR_NULL:
      return "null argument";
    case MLC_ERR_DOMAIN:
      return "domain error";
    case MLC_ERR_CONFIG:
      return "configuration error";
    case MLC_ERR_ORDER:
      return "order too high";
    case MLC_ERR_INSUFFICIENT:
      return "insufficient data";
    case MLC_ERR_NUMERIC:
      return "numerical fault";
    case MLC_ERR_BUFFER:
      return "buffer too small";
    case MLC_ERR_INTERNAL:
      return "internal error";
  }
  return "unknown status";
}

const char* mlc_regime_name(int regime) {
  switch (regime) {
    case MLC_BULK:
      return "bulk";
    case MLC_EDGE:
      return "edge";
    case MLC_OUTSIDE:
      return "outside";
    default:
      return "unknown";
  }
}

const char* mlc_gamma_regime_name(int regime) {
  switch (regime) {
    case MLC_GAMMA_SERIES:
      return specfun::to_string(specfun::GammaRegime::SeriesSmallZ);
    case MLC_GAMMA_CONTINUED_FRACTION:
      return specfun::to_string(specfun::GammaRegime::ContinuedFraction);
    case MLC_GAMMA_TEMME:
      return specfun::to_string(specfun::GammaRegime::TemmeUniform);
    case MLC_GAMMA_LARGE_Z:
      return specfun::to_string(specfun::GammaRegime::FixedALargeZ);
    default:
      return "unknown";
  }
}

mlc_status mlc_context_create(mlc_context** out) {
  if (out == nullptr) return MLC_ERR_NULL;
  *out = new (std::nothrow) mlc_context();
  return *out != nullptr ? MLC_OK : MLC_ERR_INTERNAL;
}

void mlc_context_destroy(mlc_context* ctx) { delete ctx; }

mlc_status mlc_context_set_threads(mlc_context* ctx, unsigned threads) {
  return guarded(ctx, [&] { ctx->par.threads = threads; });
}

mlc_status mlc_context_set_quadrature(mlc_context* ctx, double abs_tol, int max_intervals) {
  return guarded(ctx, [&] {
    if (!(abs_tol > 0.0) || max_intervals < 1) throw ConfigError("quadrature tolerance and interval cap must be positive");
    ctx->quad.abs_tol = abs_tol;
    ctx->quad.max_intervals = max_intervals;
  });
}

const char* mlc_context_last_error(const mlc_context* ctx) {
  return ctx == nullptr ? "null context" : ctx->last_error.c_str();
}

mlc_status mlc_erfc(mlc_context* ctx, double t, double* out) {
  return guarded(ctx, [&] {
    require(out);
    *out = specfun::erfc(t);
  });
}

mlc_status mlc_log_gamma(mlc_context* ctx, double x, double* out) {
  return guarded(ctx, [&] {
    require(out);
    *out = specfun::log_gamma(x);
  });
}

mlc_status mlc_reg_lower_gamma(mlc_context* ctx, double a, double z, double* out, int* regime) {
  return guarded(ctx, [&] {
    require(out);
    const auto g = specfun::reg_gamma_pair(a, z);
    *out = g.lower;
    if (regime != nullptr) *regime = gamma_code(g.regime);
  });
}

mlc_status mlc_eta_of_lambda(mlc_context* ctx, double lambda, double* eta) {
  return guarded(ctx, [&] {
    require(eta);
    *eta = specfun::eta_of_lambda(lambda).eta;
  });
}

mlc_status mlc_temme_R(mlc_context* ctx, double a, double lambda, double* out) {
  return guarded(ctx, [&] {
    require(out);
    *out = specfun::temme_R(a, specfun::eta_of_lambda(lambda));
  });
}

mlc_status mlc_log_barnes_g(mlc_context* ctx, double z, double* out) {
  return guarded(ctx, [&] {
    require(out);
    *out = specfun::log_barnes_g(z);
  });
}

mlc_status mlc_disks_create(mlc_disks** out) {
  if (out == nullptr) return MLC_ERR_NULL;
  *out = new (std::nothrow) mlc_disks();
  return *out != nullptr ? MLC_OK : MLC_ERR_INTERNAL;
}

void mlc_disks_destroy(mlc_disks* disks) { delete disks; }

mlc_status mlc_disks_add_fixed(mlc_disks* disks, double r, double u) {
  if (disks == nullptr) return MLC_ERR_NULL;
  if (!(r > 0.0) || !std::isfinite(r) || !std::isfinite(u)) return MLC_ERR_CONFIG;
  disks->system.add(Disk::fixed(r, u));
  return MLC_OK;
}

mlc_status mlc_disks_add_edge(mlc_disks* disks, double s, double u) {
  if (disks == nullptr) return MLC_ERR_NULL;
  if (!std::isfinite(s) || !std::isfinite(u)) return MLC_ERR_CONFIG;
  disks->system.add(Disk::edge(s, u));
  return MLC_OK;
}

mlc_status mlc_disks_count(const mlc_disks* disks, size_t* out) {
  if (disks == nullptr || out == nullptr) return MLC_ERR_NULL;
  *out = disks->system.size();
  return MLC_OK;
}

mlc_status mlc_disks_set_weights(mlc_disks* disks, const double* u, size_t count) {
  if (disks == nullptr || (u == nullptr && count > 0)) return MLC_ERR_NULL;
  if (count != disks->system.size()) return MLC_ERR_CONFIG;
  for (size_t i = 0; i < count; ++i) {
    if (!std::isfinite(u[i])) return MLC_ERR_CONFIG;
  }
  disks->system = disks->system.with_weights(std::span<const double>(u, count));
  return MLC_OK;
}

mlc_status mlc_disks_resolve(mlc_context* ctx, const mlc_disks* disks, const mlc_ensemble* ens, double* radii,
                             size_t capacity) {
  return guarded(ctx, [&] {
    require(disks, radii);
    const auto r = disks->system.resolve(params_of(ens));
    require_capacity(capacity, r.size());
    std::copy(r.begin(), r.end(), radii);
  });
}

mlc_status mlc_disks_classify(mlc_context* ctx, const mlc_disks* disks, double b, int* regimes, double* r_or_s,
                              size_t capacity) {
  return guarded(ctx, [&] {
    require(disks, regimes, r_or_s);
    const auto cls = disks->system.classify(b);
    require_capacity(capacity, cls.size());
    for (size_t i = 0; i < cls.size(); ++i) {
      regimes[i] = regime_code(cls[i].regime);
      r_or_s[i] = cls[i].r_or_s;
    }
  });
}

mlc_status mlc_log_mgf_exact(mlc_context* ctx, const mlc_ensemble* ens, const mlc_disks* disks, double* out) {
  return guarded(ctx, [&] {
    require(disks, out);
    *out = exact::log_mgf_exact(params_of(ens), disks->system, ctx->par);
  });
}

mlc_status mlc_log_partition_exact(mlc_context* ctx, const mlc_ensemble* ens, double* out) {
  return guarded(ctx, [&] {
    require(out);
    *out = exact::log_partition_exact(params_of(ens));
  });
}

mlc_status mlc_bernoulli_profile(mlc_context* ctx, const mlc_ensemble* ens, const mlc_disks* disks, double* P,
                                 size_t capacity) {
  return guarded(ctx, [&] {
    require(disks, P);
    const auto params = params_of(ens);
    require_capacity(capacity, static_cast<size_t>(params.n) * disks->system.size());
    const auto prof = exact::bernoulli_profile(params, disks->system, ctx->par);
    std::copy(prof.lower.begin(), prof.lower.end(), P);
  });
}

mlc_status mlc_joint_cumulants_exact(mlc_context* ctx, const mlc_ensemble* ens, const mlc_disks* disks,
                                     const int* orders, size_t count, double* out) {
  return guarded(ctx, [&] {
    require(disks, orders, out);
    const size_t p = disks->system.size();
    std::vector<exact::MultiIndex> idx(count);
    for (size_t k = 0; k < count; ++k) idx[k].assign(orders + k * p, orders + (k + 1) * p);
    const auto v = exact::joint_cumulants_exact(params_of(ens), disks->system, idx, ctx->par);
    std::copy(v.begin(), v.end(), out);
  });
}

mlc_status mlc_mean_var_exact(mlc_context* ctx, const mlc_ensemble* ens, const mlc_disks* disks, double* means,
                              double* covariance, size_t p) {
  return guarded(ctx, [&] {
    require(disks, means, covariance);
    require_capacity(p, disks->system.size());
    const auto mv = exact::mean_var_exact(params_of(ens), disks->system, ctx->par);
    std::copy(mv.means.begin(), mv.means.end(), means);
    std::copy(mv.covariance.begin(), mv.covariance.end(), covariance);
  });
}

mlc_status mlc_F(mlc_context* ctx, double t, double s, double* out) {
  return guarded(ctx, [&] {
    require(out);
    *out = asymptotics::F_func(t, s);
  });
}

mlc_status mlc_G(mlc_context* ctx, double t, double s, double* out) {
  return guarded(ctx, [&] {
    require(out);
    *out = asymptotics::G_func(t, s);
  });
}

mlc_status mlc_theorem_coefficients(mlc_context* ctx, double b, double alpha, const mlc_disks* disks,
                                    mlc_coefficients* out, mlc_disk_term* per_disk, size_t capacity) {
  return guarded(ctx, [&] {
    require(disks, out);
    if (per_disk != nullptr) require_capacity(capacity, disks->system.size());
    const auto c = asymptotics::theorem_coefficients(b, alpha, disks->system, ctx->quad);
    *out = {c.C1, c.C2, c.C3, c.C4, c.quad_error, c.edge_extreme ? 1 : 0};
    if (per_disk != nullptr) {
      for (size_t i = 0; i < c.per_disk.size(); ++i) {
        const auto& d = c.per_disk[i];
        per_disk[i] = {regime_code(d.regime), d.r_or_s, d.C1, d.C2, d.C3, d.C4, d.quad_error};
      }
    }
  });
}

mlc_status mlc_predict_log_mgf(mlc_context* ctx, const mlc_ensemble* ens, const mlc_disks* disks, double* out) {
  return guarded(ctx, [&] {
    require(disks, out);
    *out = asymptotics::predict_log_mgf(params_of(ens), disks->system, ctx->quad);
  });
}

mlc_status mlc_cumulant_coeffs(mlc_context* ctx, int regime, int order, double b, double alpha, double r_or_s,
                               mlc_cumulant_series* out) {
  return guarded(ctx, [&] {
    require(out);
    DiskClass cls{};
    switch (regime) {
      case MLC_BULK:
        cls = {DiskRegime::Bulk, r_or_s};
        break;
      case MLC_EDGE:
        cls = {DiskRegime::Edge, r_or_s};
        break;
      case MLC_OUTSIDE:
        cls = {DiskRegime::Outside, r_or_s};
        if (!(r_or_s > critical_radius(b))) throw ConfigError("outside radius must exceed b^{-1/(2b)}");
        break;
      default:
        throw ConfigError("unknown regime code " + std::to_string(regime));
    }
    *out = to_c(asymptotics::cumulant_coeffs(order, b, alpha, cls, ctx->quad));
  });
}

mlc_status mlc_edge_closed_form(mlc_context* ctx, int order, double b, double alpha, double s,
                                mlc_cumulant_series* out) {
  return guarded(ctx, [&] {
    require(out);
    *out = to_c(asymptotics::edge_cumulant_closed_form(order, b, alpha, s));
  });
}

mlc_status mlc_zn_expansion(mlc_context* ctx, const mlc_ensemble* ens, int rational_cap, int require_constant,
                            mlc_zn* out) {
  return guarded(ctx, [&] {
    require(out);
    const auto z = asymptotics::zn_expansion(params_of(ens), {rational_cap, require_constant != 0});
    *out = {z.n,
            z.has_constant ? 1 : 0,
            z.n1,
            z.n2,
            z.constant,
            static_cast<double>(z.exact),
            static_cast<double>(z.expansion),
            static_cast<double>(z.residual())};
  });
}

mlc_status mlc_sample_counts(mlc_context* ctx, const mlc_ensemble* ens, const mlc_disks* disks, size_t num_samples,
                             uint64_t seed, mlc_batch** out) {
  return guarded(ctx, [&] {
    require(disks, out);
    auto* handle = new mlc_batch();
    try {
      handle->batch = sampler::sample_counts(params_of(ens), disks->system, num_samples, seed, ctx->par);
    } catch (...) {
      delete handle;
      throw;
    }
    *out = handle;
  });
}

void mlc_batch_destroy(mlc_batch* batch) { delete batch; }

mlc_status mlc_batch_shape(const mlc_batch* batch, size_t* num_samples, size_t* p) {
  if (batch == nullptr || num_samples == nullptr || p == nullptr) return MLC_ERR_NULL;
  *num_samples = batch->batch.num_samples;
  *p = batch->batch.p;
  return MLC_OK;
}

mlc_status mlc_batch_counts(const mlc_batch* batch, int64_t* out, size_t capacity) {
  if (batch == nullptr || out == nullptr) return MLC_ERR_NULL;
  if (capacity < batch->batch.counts.size()) return MLC_ERR_BUFFER;
  std::copy(batch->batch.counts.begin(), batch->batch.counts.end(), out);
  return MLC_OK;
}

mlc_status mlc_batch_radii(const mlc_batch* batch, double* out, size_t capacity) {
  if (batch == nullptr || out == nullptr) return MLC_ERR_NULL;
  if (capacity < batch->batch.radii.size()) return MLC_ERR_BUFFER;
  std::copy(batch->batch.radii.begin(), batch->batch.radii.end(), out);
  return MLC_OK;
}

mlc_status mlc_batch_cumulants(mlc_context* ctx, const mlc_batch* batch, size_t disk, int max_order, mlc_kstat* out) {
  return guarded(ctx, [&] {
    require(batch, out);
    if (disk >= batch->batch.p) throw ConfigError("disk index out of range");
    const auto ks = sampler::k_statistics(batch->batch.column(disk), max_order);
    for (size_t i = 0; i < ks.size(); ++i) out[i] = {ks[i].order, ks[i].value, ks[i].std_error};
  });
}

mlc_status mlc_sample_scaled_moduli(mlc_context* ctx, const mlc_ensemble* ens, size_t num_samples, uint64_t seed,
                                    double* out, size_t capacity) {
  return guarded(ctx, [&] {
    require(out);
    const auto params = params_of(ens);
    require_capacity(capacity, num_samples * static_cast<size_t>(params.n));
    const auto v = sampler::sample_scaled_moduli(params, num_samples, seed, ctx->par);
    std::copy(v.begin(), v.end(), out);
  });
}

mlc_status mlc_residual_scan(mlc_context* ctx, double b, double alpha, const mlc_disks* disks,
                             const int64_t* n_values, size_t count, double rate_lo, double rate_hi,
                             mlc_residual_point* points, mlc_residual_summary* summary) {
  return guarded(ctx, [&] {
    require(disks, n_values, points, summary);
    const std::vector<std::int64_t> ns(n_values, n_values + count);
    const auto scan = verify::residual_scan(b, alpha, disks->system, ns, ctx->quad, ctx->par);
    for (size_t i = 0; i < count; ++i) {
      points[i] = {scan.n_values[i], scan.exact[i], scan.predicted[i], scan.residuals[i], scan.noise[i],
                   scan.used[i] ? 1 : 0};
    }
    *summary = {scan.fitted_rate,
                scan.fitted_K,
                scan.quad_error,
                scan.last_ratio(),
                scan.monotone_decreasing() ? 1 : 0,
                verify::residual_scan_passes(scan, {rate_lo, rate_hi}) ? 1 : 0};
  });
}

mlc_status mlc_coefficient_fit(mlc_context* ctx, double b, double alpha, const mlc_disks* disks,
                               const int64_t* n_values, size_t count, mlc_fit* out) {
  return guarded(ctx, [&] {
    require(disks, n_values, out);
    const std::vector<std::int64_t> ns(n_values, n_values + count);
    const auto fit = verify::coefficient_fit(b, alpha, disks->system, ns, ctx->quad, ctx->par);
    for (int k = 0; k < 4; ++k) {
      out->fitted[k] = fit.fitted[k];
      out->theorem[k] = fit.theorem[k];
      out->deviation[k] = fit.deviation[k];
    }
    out->condition = fit.condition;
  });
}

mlc_status mlc_clt_experiment(mlc_context* ctx, double b, double alpha, const double* bulk_radii, size_t m,
                              int has_edge, double s, int64_t n, size_t num_samples, uint64_t seed, double tolerance,
                              double* means, double* covariance, size_t dim_capacity, mlc_clt_summary* summary) {
  return guarded(ctx, [&] {
    require(means, covariance, summary);
    if (m > 0) require(bulk_radii);
    const size_t dim = m + (has_edge != 0 ? 1 : 0);
    require_capacity(dim_capacity, dim);
    std::optional<double> edge;
    if (has_edge != 0) edge = s;
    const std::vector<double> radii(bulk_radii, bulk_radii + m);
    const auto rep = verify::clt_experiment(b, alpha, radii, edge, n, num_samples, seed, ctx->par);
    std::copy(rep.means.begin(), rep.means.end(), means);
    std::copy(rep.covariance.begin(), rep.covariance.end(), covariance);
    *summary = {rep.n, rep.num_samples, rep.seed, rep.dim, rep.max_deviation, verify::clt_passes(rep, tolerance) ? 1 : 0};
  });
}

}  // extern "C"
