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
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "asymptotics.hpp"
#include "ensemble.hpp"
#include "parallel.hpp"

// Experiments that confront the exact engine, the asymptotic predictions and
// the sampler.
namespace mlcount::verify {

struct ResidualScan {
  std::vector<std::int64_t> n_values;
  std::vector<double> exact;
  std::vector<double> predicted;
  std::vector<double> residuals;  // exact - predicted
  std::vector<double> noise;      // propagated quadrature + summation error
  std::vector<bool> used;         // |residual| > kNoiseFactor * noise
  double quad_error = 0.0;
  // Least-squares fit log|r| = log K + rate log n over the used points; NaN
  // when fewer than two points clear the noise floor.
  double fitted_rate = 0.0;
  double fitted_K = 0.0;

  bool rate_available() const;
  // |r| decreasing along n_values.
  bool monotone_decreasing() const;
  // |r(n_last)| / |r(n_prev)| for the largest pair.
  double last_ratio() const;
};

inline constexpr double kNoiseFactor = 100.0;

// Requires >= 4 strictly increasing n-values, each >= 50, spanning a factor
// of at least 8. Edge disks are re-resolved at every n.
ResidualScan residual_scan(double b, double alpha, const DiskSystem& disks, const std::vector<std::int64_t>& n_values,
                           const quadrature::Options& opt = asymptotics::default_quadrature(), Parallelism par = {});

struct CoefficientFit {
  std::vector<std::int64_t> n_values;
  std::array<double, 4> fitted{};
  std::array<double, 4> theorem{};
  std::array<double, 4> deviation{};  // fitted - theorem
  double condition = 0.0;             // of the column-scaled design matrix
};

inline constexpr double kMaxFitCondition = 1e10;

// Least squares of exact log-MGF on {n, sqrt(n), 1, 1/sqrt(n)}; >= 6 n-values.
CoefficientFit coefficient_fit(double b, double alpha, const DiskSystem& disks,
                               const std::vector<std::int64_t>& n_values,
                               const quadrature::Options& opt = asymptotics::default_quadrature(),
                               Parallelism par = {});

struct CltReport {
  std::int64_t n = 0;
  std::size_t num_samples = 0;
  std::uint64_t seed = 0;
  std::size_t dim = 0;
  std::vector<double> means;
  std::vector<double> covariance;  // row-major dim x dim
  double max_deviation = 0.0;      // max |Cov - I| entrywise
};

inline constexpr std::size_t kMinCltSamples = 100;

// Normalized bulk statistics pi^{1/4} (N - b r^{2b} n) / (sqrt(b r^b) n^{1/4})
// and, when an edge parameter is given, (N - n - c1 sqrt(n)) / (sqrt(c2) n^{1/4}).
CltReport clt_experiment(double b, double alpha, const std::vector<double>& bulk_radii, std::optional<double> s_frak,
                         std::int64_t n, std::size_t num_samples, std::uint64_t seed, Parallelism par = {});

// Pass/fail thresholds shared by the CLI and the acceptance suite.
struct RateWindow {
  double lo = -1.35;
  double hi = -0.75;
};

bool residual_scan_passes(const ResidualScan& scan, const RateWindow& window = {});
inline constexpr double kCltTolerance = 0.05;
bool clt_passes(const CltReport& report, double tolerance = kCltTolerance);

}  // namespace mlcount::verify
