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
#include "verify.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "error.hpp"
#include "exact.hpp"
#include "sampler.hpp"

namespace mlcount::verify {

namespace {

void check_n_values(const std::vector<std::int64_t>& n_values, std::size_t minimum, bool need_span) {
  if (n_values.size() < minimum) {
    throw InsufficientDataError("need at least " + std::to_string(minimum) + " n-values, got " +
                                std::to_string(n_values.size()));
  }
  for (std::size_t i = 0; i < n_values.size(); ++i) {
    if (n_values[i] < 50) throw ConfigError("n-values must be >= 50");
    if (i > 0 && n_values[i] <= n_values[i - 1]) throw ConfigError("n-values must be strictly increasing");
  }
  if (need_span && n_values.back() < 8 * n_values.front()) {
    throw ConfigError("n-values must span at least a factor of 8");
  }
}

}  // namespace

bool ResidualScan::rate_available() const { return std::isfinite(fitted_rate); }

bool ResidualScan::monotone_decreasing() const {
  for (std::size_t i = 1; i < residuals.size(); ++i) {
    if (!(std::abs(residuals[i]) < std::abs(residuals[i - 1]))) return false;
  }
  return true;
}

double ResidualScan::last_ratio() const {
  const std::size_t k = residuals.size();
  if (k < 2 || residuals[k - 2] == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return std::abs(residuals[k - 1] / residuals[k - 2]);
}

ResidualScan residual_scan(double b, double alpha, const DiskSystem& disks, const std::vector<std::int64_t>& n_values,
                           const quadrature::Options& opt, Parallelism par) {
  check_n_values(n_values, 4, true);
  const auto coeffs = asymptotics::theorem_coefficients(b, alpha, disks, opt);
  ResidualScan scan;
  scan.n_values = n_values;
  scan.quad_error = coeffs.quad_error;
  const auto u = disks.weights();
  double weight_scale = 0.0;
  for (double x : u) weight_scale += std::abs(x);
  std::vector<double> xs, ys;
  for (std::int64_t n : n_values) {
    const EnsembleParams params{b, alpha, n};
    const double ex = exact::log_mgf_exact(params, disks, par);
    const double pr = asymptotics::evaluate(coeffs, n);
    const double rt = std::sqrt(static_cast<double>(n));
    // Quadrature error enters through C2..C4; the exact sum carries about
    // one rounding per particle.
    const double noise = coeffs.quad_error * (rt + 1.0 + 1.0 / rt) +
                         16.0 * std::numeric_limits<double>::epsilon() * weight_scale * static_cast<double>(n);
    const double r = ex - pr;
    scan.exact.push_back(ex);
    scan.predicted.push_back(pr);
    scan.residuals.push_back(r);
    scan.noise.push_back(noise);
    const bool use = std::abs(r) > kNoiseFactor * noise;
    scan.used.push_back(use);
    if (use) {
      xs.push_back(std::log(static_cast<double>(n)));
      ys.push_back(std::log(std::abs(r)));
    }
  }
  if (xs.size() < 2) {
    scan.fitted_rate = std::numeric_limits<double>::quiet_NaN();
    scan.fitted_K = std::numeric_limits<double>::quiet_NaN();
    return scan;
  }
  const double k = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i] / k;
    my += ys[i] / k;
  }
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  scan.fitted_rate = sxy / sxx;
  scan.fitted_K = std::exp(my - scan.fitted_rate * mx);
  return scan;
}

CoefficientFit coefficient_fit(double b, double alpha, const DiskSystem& disks,
                               const std::vector<std::int64_t>& n_values, const quadrature::Options& opt,
                               Parallelism par) {
  check_n_values(n_values, 6, false);
  CoefficientFit fit;
  fit.n_values = n_values;
  const auto coeffs = asymptotics::theorem_coefficients(b, alpha, disks, opt);
  fit.theorem = {coeffs.C1, coeffs.C2, coeffs.C3, coeffs.C4};

  const auto rows = static_cast<Eigen::Index>(n_values.size());
  Eigen::MatrixXd A(rows, 4);
  Eigen::VectorXd y(rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const std::int64_t n = n_values[static_cast<std::size_t>(i)];
    const double nn = static_cast<double>(n);
    A(i, 0) = nn;
    A(i, 1) = std::sqrt(nn);
    A(i, 2) = 1.0;
    A(i, 3) = 1.0 / std::sqrt(nn);
    y(i) = exact::log_mgf_exact({b, alpha, n}, disks, par);
  }
  Eigen::VectorXd scale = A.colwise().norm().transpose();
  const Eigen::MatrixXd As = A * scale.cwiseInverse().asDiagonal();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(As, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  fit.condition = sv(0) / sv(sv.size() - 1);
  if (!(fit.condition < kMaxFitCondition)) {
    throw InsufficientDataError("coefficient fit is ill-conditioned (n-range too narrow)");
  }
  const Eigen::VectorXd coef = svd.solve(y).cwiseQuotient(scale);
  for (int k = 0; k < 4; ++k) {
    fit.fitted[k] = coef(k);
    fit.deviation[k] = fit.fitted[k] - fit.theorem[k];
  }
  return fit;
}

CltReport clt_experiment(double b, double alpha, const std::vector<double>& bulk_radii, std::optional<double> s_frak,
                         std::int64_t n, std::size_t num_samples, std::uint64_t seed, Parallelism par) {
  const EnsembleParams params{b, alpha, n};
  params.validate();
  if (num_samples < kMinCltSamples) {
    throw InsufficientDataError("clt experiment needs at least " + std::to_string(kMinCltSamples) + " samples");
  }
  DiskSystem disks;
  for (double r : bulk_radii) disks.add(Disk::fixed(r));
  if (s_frak) disks.add(Disk::edge(*s_frak));
  if (disks.empty()) throw ConfigError("clt experiment needs at least one disk");
  const auto classes = disks.classify(b);
  for (std::size_t i = 0; i < bulk_radii.size(); ++i) {
    if (classes[i].regime != DiskRegime::Bulk) throw ConfigError("clt experiment: fixed radii must be in the bulk");
  }

  const std::size_t dim = disks.size();
  const double nn = static_cast<double>(n);
  const double n14 = std::pow(nn, 0.25);
  std::vector<double> center(dim), scale(dim);
  for (std::size_t i = 0; i < bulk_radii.size(); ++i) {
    const double rb = std::pow(bulk_radii[i], b);
    center[i] = b * rb * rb * nn;
    scale[i] = std::sqrt(b * rb) * n14 / std::pow(std::numbers::pi, 0.25);
  }
  if (s_frak) {
    const auto c1 = asymptotics::edge_cumulant_closed_form(1, b, alpha, *s_frak);
    const auto c2 = asymptotics::edge_cumulant_closed_form(2, b, alpha, *s_frak);
    center[dim - 1] = nn + c1.c * std::sqrt(nn);
    scale[dim - 1] = std::sqrt(c2.c) * n14;
  }

  const auto batch = sampler::sample_counts(params, disks, num_samples, seed, par);
  CltReport rep;
  rep.n = n;
  rep.num_samples = num_samples;
  rep.seed = seed;
  rep.dim = dim;
  Eigen::MatrixXd X(static_cast<Eigen::Index>(num_samples), static_cast<Eigen::Index>(dim));
  for (std::size_t s = 0; s < num_samples; ++s) {
    for (std::size_t k = 0; k < dim; ++k) {
      X(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(k)) =
          (static_cast<double>(batch.count(s, k)) - center[k]) / scale[k];
    }
  }
  const Eigen::RowVectorXd mean = X.colwise().mean();
  const Eigen::MatrixXd centered = X.rowwise() - mean;
  const Eigen::MatrixXd cov = centered.transpose() * centered / static_cast<double>(num_samples - 1);
  for (std::size_t i = 0; i < dim; ++i) {
    rep.means.push_back(mean(static_cast<Eigen::Index>(i)));
    for (std::size_t k = 0; k < dim; ++k) {
      const double v = cov(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k));
      rep.covariance.push_back(v);
      rep.max_deviation = std::max(rep.max_deviation, std::abs(v - (i == k ? 1.0 : 0.0)));
    }
  }
  return rep;
}

bool residual_scan_passes(const ResidualScan& scan, const RateWindow& window) {
  return scan.rate_available() && scan.fitted_rate >= window.lo && scan.fitted_rate <= window.hi &&
         scan.monotone_decreasing();
}

bool clt_passes(const CltReport& report, double tolerance) { return report.max_deviation <= tolerance; }

}  // namespace mlcount::verify
