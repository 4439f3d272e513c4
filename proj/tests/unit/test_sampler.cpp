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
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <map>

#include "error.hpp"
#include "exact.hpp"
#include "sampler.hpp"
#include "specfun.hpp"
#include "test_support.hpp"

using namespace mlcount;
using namespace mlcount::sampler;

namespace {

DiskSystem fixed_disks(const std::vector<double>& radii) {
  DiskSystem d;
  for (double r : radii) d.add(Disk::fixed(r, 0.0));
  return d;
}

double mean_of(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

}  // namespace

TEST_CASE("reproducible and independent of the worker count") {
  const EnsembleParams params{1.3, 0.2, 120};
  const auto disks = fixed_disks({0.4, 0.8, 1.2});
  const auto a = sample_counts(params, disks, 500, 99, Parallelism{1});
  const auto b = sample_counts(params, disks, 500, 99, Parallelism{4});
  const auto c = sample_counts(params, disks, 500, 99, Parallelism{3});
  CHECK(a.counts == b.counts);
  CHECK(a.counts == c.counts);
  const auto d = sample_counts(params, disks, 500, 100, Parallelism{1});
  CHECK(a.counts != d.counts);
  // A longer run extends a shorter one with the same seed.
  const auto e = sample_counts(params, disks, 700, 99, Parallelism{2});
  CHECK(std::equal(a.counts.begin(), a.counts.end(), e.counts.begin()));
}

TEST_CASE("counts are nested and bounded") {
  const EnsembleParams params{0.8, -0.5, 90};
  const auto batch = sample_counts(params, fixed_disks({0.2, 0.5, 0.9, 1.1, 3.0}), 2000, 3);
  for (std::size_t s = 0; s < batch.num_samples; ++s) {
    for (std::size_t l = 0; l < batch.p; ++l) {
      CHECK(batch.count(s, l) >= 0);
      CHECK(batch.count(s, l) <= params.n);
      if (l > 0) CHECK(batch.count(s, l - 1) <= batch.count(s, l));
    }
  }
}

TEST_CASE("single particle inclusion frequency") {
  const std::size_t S = 100000;
  for (double r : {0.3, 1.0}) {
    const EnsembleParams params{1.0, 0.0, 1};
    const auto batch = sample_counts(params, fixed_disks({r}), S, 17);
    const double P = 1 - std::exp(-r * r);
    const double freq = mean_of(batch.column(0));
    CHECK(std::abs(freq - P) <= 4 * std::sqrt(P * (1 - P) / S));
    for (double c : batch.column(0)) CHECK((c == 0.0 || c == 1.0));
  }
}

TEST_CASE("mean counts match the exact means") {
  const std::size_t S = 100000;
  const EnsembleParams params{1.6, 0.4, 50};
  const auto disks = fixed_disks({0.5, 0.8});
  const auto batch = sample_counts(params, disks, S, 2024);
  const auto mv = exact::mean_var_exact(params, disks);
  for (std::size_t l = 0; l < 2; ++l) {
    const double m = mean_of(batch.column(l));
    CHECK(std::abs(m - mv.means[l]) <= 4 * std::sqrt(mv.cov(l, l) / S));
  }
}

TEST_CASE("empirical MGF matches the exact MGF") {
  const std::size_t S = 40000;
  const EnsembleParams params{1.0, 0.0, 200};
  DiskSystem disks;
  disks.add(Disk::fixed(0.6, 0.2));
  const auto batch = sample_counts(params, disks, S, 7);
  double acc = 0;
  for (double c : batch.column(0)) acc += std::exp(0.2 * c);
  const double emp = acc / S;
  const double exact_mgf = std::exp(exact::log_mgf_exact(params, disks));
  // Relative to exp(u E[N]) to keep the comparison scale-free.
  CHECK(std::abs(emp / exact_mgf - 1.0) <= 5.0 / std::sqrt(static_cast<double>(S)));
}

TEST_CASE("scaled moduli of one particle follow the gamma law (KS)") {
  const std::size_t S = 100000;
  for (auto [b, alpha] : {std::pair{0.8, -0.6}, std::pair{1.0, 0.0}, std::pair{2.0, 3.0}}) {
    const EnsembleParams params{b, alpha, 1};
    auto g = sample_scaled_moduli(params, S, 41);
    std::sort(g.begin(), g.end());
    const double shape = (1 + alpha) / b;
    double D = 0;
    for (std::size_t i = 0; i < S; ++i) {
      const double F = specfun::reg_lower_gamma(shape, g[i]);
      D = std::max({D, std::abs(F - static_cast<double>(i) / S), std::abs(F - static_cast<double>(i + 1) / S)});
    }
    // Asymptotic Kolmogorov critical value at significance 1e-3.
    CHECK(D * std::sqrt(static_cast<double>(S)) < 1.949);
  }
}

TEST_CASE("two-particle joint law of nested counts") {
  // Probabilities of the annulus pair (k1, k2) for two particles from the
  // angular-integrated density (r1^2 + r2^2) w(r1) w(r2) r1 r2, by direct
  // radial quadrature on each annulus.
  const double r1 = 0.5, r2 = 0.9;
  const long long n = 2;
  const testsupport::GaussLegendre rule(40);
  const double edges[4] = {0.0, r1, r2, 8.0};
  auto moment = [&](int power, int k) {
    return static_cast<double>(rule.integrate(
        [&](long double r) { return std::pow(r, power) * std::exp(-static_cast<long double>(n) * r * r); }, edges[k],
        edges[k + 1], 200));
  };
  double m1[3], m3[3];
  for (int k = 0; k < 3; ++k) {
    m1[k] = moment(1, k);
    m3[k] = moment(3, k);
  }
  std::map<std::pair<int, int>, double> law;
  double total = 0;
  for (int a = 0; a < 3; ++a) {
    for (int c = 0; c < 3; ++c) {
      const double w = m3[a] * m1[c] + m1[a] * m3[c];
      total += w;
      const int N1 = (a == 0) + (c == 0);
      const int N2 = (a <= 1) + (c <= 1);
      law[{N1, N2}] += w;
    }
  }
  const std::size_t S = 100000;
  const auto batch = sample_counts({1.0, 0.0, n}, fixed_disks({r1, r2}), S, 555);
  std::map<std::pair<int, int>, double> freq;
  for (std::size_t s = 0; s < S; ++s) {
    freq[{static_cast<int>(batch.count(s, 0)), static_cast<int>(batch.count(s, 1))}] += 1.0 / S;
  }
  for (auto& [key, w] : law) {
    const double p = w / total;
    CHECK_MESSAGE(std::abs(freq[key] - p) <= 4 * std::sqrt(p * (1 - p) / S) + 1e-12,
                  "N1=" << key.first << " N2=" << key.second);
  }
  for (const auto& [key, f] : freq) CHECK(law.count(key) == 1);
}

TEST_CASE("gamma variates have the right mean and variance") {
  const std::size_t S = 200000;
  for (double shape : {0.05, 0.3, 1.0, 7.5, 300.0}) {
    double s1 = 0, s2 = 0, lowest = INFINITY;
    for (std::size_t i = 0; i < S; ++i) {
      KeyedStream rng(12345, i, 0);
      const double g = gamma_variate(shape, rng);
      lowest = std::min(lowest, g);
      s1 += g;
      s2 += g * g;
    }
    CHECK(lowest >= 0.0);
    const double m = s1 / S;
    const double v = s2 / S - m * m;
    CHECK(std::abs(m - shape) <= 4 * std::sqrt(shape / S));
    // Var of the sample variance for a gamma law is about (6 + 2 shape) shape^2 / S.
    CHECK(std::abs(v - shape) <= 4 * std::sqrt((6 * shape + 2 * shape * shape) / S) + 1e-12);
  }
}

TEST_CASE("k-statistics on fixed data") {
  const std::vector<double> base = {1, 2, 3, 4, 5, 10, -3, 7, 7, 0.5};
  std::vector<double> data;
  for (int rep = 0; rep < 4; ++rep) {
    for (std::size_t i = 0; i < base.size(); ++i) data.push_back(base[i] + (rep * 10 + i) / 7.0);
  }
  // Rational-arithmetic values from central moments.
  const auto k = k_statistics(data, 4);
  REQUIRE(k.size() == 4);
  CHECK(k[0].value == doctest::Approx(6.435714285714286).epsilon(1e-14));
  CHECK(k[1].value == doctest::Approx(16.527943485086343).epsilon(1e-13));
  CHECK(k[2].value == doctest::Approx(4.956721474014707).epsilon(1e-11));
  CHECK(k[3].value == doctest::Approx(-146.09732772649758).epsilon(1e-12));
  for (const auto& s : k) CHECK(s.std_error > 0.0);
  // The first standard error is the usual standard error of the mean.
  CHECK(k[0].std_error == doctest::Approx(std::sqrt(16.527943485086343 / 40)).epsilon(1e-12));
}

TEST_CASE("k-statistics of constant data and errors") {
  const std::vector<double> flat(50, 42.0);
  const auto k = k_statistics(flat, 4);
  CHECK(k[0].value == 42.0);
  for (int j = 1; j < 4; ++j) CHECK(k[j].value == 0.0);
  CHECK_THROWS_AS(k_statistics(std::vector<double>(39, 1.0), 4), InsufficientDataError);
  CHECK_NOTHROW(k_statistics(std::vector<double>(40, 1.0), 4));
  CHECK_THROWS_AS(k_statistics(flat, 5), OrderError);
  CHECK_THROWS_AS(k_statistics(flat, 0), OrderError);
}

TEST_CASE("Monte Carlo variance in the Ginibre bulk") {
  const EnsembleParams params{1.0, 0.0, 1000};
  const auto disks = fixed_disks({0.6});
  const auto batch = sample_counts(params, disks, 20000, 31);
  const auto est = mc_cumulants(batch, 2);
  const auto mv = exact::mean_var_exact(params, disks);
  CHECK(est[0].mean == doctest::Approx(mean_of(batch.column(0))).epsilon(1e-14));
  CHECK(est[0].cumulants[0].value == est[0].mean);
  CHECK(std::abs(est[0].cumulants[1].value - mv.cov(0, 0)) <= 4 * est[0].cumulants[1].std_error);
  CHECK(std::abs(est[0].mean - mv.means[0]) <= 4 * est[0].cumulants[0].std_error);
}
