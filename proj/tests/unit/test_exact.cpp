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

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "ensemble.hpp"
#include "error.hpp"
#include "exact.hpp"
#include "test_support.hpp"

using namespace mlcount;
using exact::MultiIndex;
using cplx = std::complex<double>;

namespace {

DiskSystem fixed_disks(const std::vector<double>& radii, const std::vector<double>& u) {
  DiskSystem d;
  for (std::size_t i = 0; i < radii.size(); ++i) d.add(Disk::fixed(radii[i], u[i]));
  return d;
}

// k-th derivative at 0 of g(z) = log M(z v), by the trapezoid rule on the
// circle |z| = rho (Cauchy's formula); spectrally accurate for analytic g.
double directional_derivative(const exact::BernoulliProfile& prof, const std::vector<double>& v, int k,
                              double rho = 0.5, int m = 64) {
  std::complex<double> acc = 0.0;
  for (int i = 0; i < m; ++i) {
    const cplx z = std::polar(rho, 2 * std::numbers::pi * i / m);
    std::vector<cplx> u(v.size());
    for (std::size_t l = 0; l < v.size(); ++l) u[l] = z * v[l];
    acc += exact::log_mgf_from_profile<cplx>(prof, u) / std::pow(z, k);
  }
  return std::tgamma(k + 1.0) * acc.real() / m;
}

// Cumulants 1..6 of S = sum_j X_j where particle j contributes weight[k] when
// it falls in annulus k. Weights are integers, so the law of S is computed by
// exact convolution of the per-particle categorical laws.
std::vector<long double> convolution_cumulants(const exact::BernoulliProfile& prof, const std::vector<int>& weight) {
  const int lo = std::min(0, *std::min_element(weight.begin(), weight.end())) * static_cast<int>(prof.n);
  const int hi = std::max(0, *std::max_element(weight.begin(), weight.end())) * static_cast<int>(prof.n);
  std::vector<long double> pmf(hi - lo + 1, 0.0L);
  pmf[-lo] = 1.0L;
  for (std::size_t j = 0; j < static_cast<std::size_t>(prof.n); ++j) {
    std::vector<long double> next(pmf.size(), 0.0L);
    for (std::size_t s = 0; s < pmf.size(); ++s) {
      if (pmf[s] == 0.0L) continue;
      for (std::size_t k = 0; k <= prof.p; ++k) {
        const long double q = prof.annulus(j, k);
        if (q > 0) next[s + weight[k]] += pmf[s] * q;
      }
    }
    pmf.swap(next);
  }
  long double mean = 0;
  for (std::size_t s = 0; s < pmf.size(); ++s) mean += pmf[s] * (static_cast<long double>(s) + lo);
  long double mu[7] = {1, 0, 0, 0, 0, 0, 0};
  for (std::size_t s = 0; s < pmf.size(); ++s) {
    const long double d = static_cast<long double>(s) + lo - mean;
    long double pw = 1;
    for (int k = 1; k <= 6; ++k) {
      pw *= d;
      mu[k] += pmf[s] * pw;
    }
  }
  return {mean,
          mu[2],
          mu[3],
          mu[4] - 3 * mu[2] * mu[2],
          mu[5] - 10 * mu[3] * mu[2],
          mu[6] - 15 * mu[4] * mu[2] - 10 * mu[3] * mu[3] + 30 * mu[2] * mu[2] * mu[2]};
}

}  // namespace

TEST_CASE("profile closed forms") {
  {
    const auto prof = exact::bernoulli_profile({1.0, 0.0, 1}, fixed_disks({1.0}, {0.0}));
    CHECK(std::abs(prof.P(0, 0) - (1 - std::exp(-1.0))) < 1e-15);
  }
  {
    const auto prof = exact::bernoulli_profile({1.5, 0.3, 40}, fixed_disks({1e-30}, {0.0}));
    for (int j = 0; j < 40; ++j) CHECK(prof.P(j, 0) == 0.0);
  }
  {
    // Transition near j = b n r^{2b} = 25 with width O(sqrt(n)).
    const auto prof = exact::bernoulli_profile({1.0, 0.0, 100}, fixed_disks({0.5}, {0.0}));
    CHECK(prof.P(4, 0) > 1 - 1e-6);
    CHECK(prof.P(59, 0) < 1e-6);
    CHECK(prof.P(24, 0) == doctest::Approx(0.5).epsilon(0.1));
  }
}

TEST_CASE("profile invariants") {
  const auto disks = fixed_disks({0.3, 0.7, 0.95, 1.4}, {0.4, -0.2, 1.1, 0.3});
  const auto prof = exact::bernoulli_profile({1.3, 0.5, 150}, disks);
  const auto omega = jump_weights(std::vector<double>{0.4, -0.2, 1.1, 0.3});
  const auto U = log_annulus_weights(std::vector<double>{0.4, -0.2, 1.1, 0.3});
  for (std::size_t j = 0; j < 150; ++j) {
    double total = 0, lhs = 1, rhs = 0;
    for (std::size_t k = 0; k <= 4; ++k) {
      const double q = prof.annulus(j, k);
      CHECK(q >= 0.0);
      total += q;
      rhs += std::exp(U[k]) * q;
      if (k < 4) lhs += omega[k] * prof.P(j, k);
      if (k > 0 && k < 4) CHECK(prof.P(j, k - 1) <= prof.P(j, k));
    }
    CHECK(std::abs(total - 1.0) < 1e-12);
    CHECK(std::abs(lhs - rhs) < 1e-12 * std::max(1.0, rhs));
  }
}

TEST_CASE("log-MGF trivial cases") {
  CHECK(exact::log_mgf_exact({2.0, 0.5, 300}, fixed_disks({0.4, 0.9}, {0.0, 0.0})) == 0.0);
  for (double r : {0.2, 1.0, 2.5}) {
    for (double u : {-1.5, 0.3, 2.0}) {
      const double expect = std::log(1 + std::expm1(u) * (1 - std::exp(-r * r)));
      CHECK(std::abs(exact::log_mgf_exact({1.0, 0.0, 1}, fixed_disks({r}, {u})) - expect) < 1e-15);
    }
  }
}

TEST_CASE("two-particle log-MGF against the direct two-fold integral") {
  // 50-digit two-dimensional quadrature of the joint density (tests/oracles/small_n.py).
  const double v = exact::log_mgf_exact({1.0, 0.0, 2}, fixed_disks({0.5}, {1.0}));
  CHECK(std::abs(v - 0.66056123083221817689) < 1e-14);
}

TEST_CASE("radial quadrature equivalence for n <= 3") {
  for (long long n : {1, 2, 3}) {
    for (double b : {0.5, 1.0, 2.0}) {
      for (double alpha : {0.0, 0.5}) {
        const std::vector<std::pair<std::vector<double>, std::vector<double>>> cases = {
            {{0.7}, {1.3}}, {{0.45, 1.1}, {-0.8, 0.6}}, {{0.9, 1.6}, {2.0, -1.0}}};
        for (const auto& [radii, u] : cases) {
          const double got = exact::log_mgf_exact({b, alpha, n}, fixed_disks(radii, u));
          const double ref = testsupport::radial_log_mgf(b, alpha, n, radii, u);
          CHECK_MESSAGE(std::abs(got - ref) <= 1e-9, "n=" << n << " b=" << b << " alpha=" << alpha);
        }
      }
    }
  }
}

TEST_CASE("MGF factorizes over particles") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const double b = 0.3 + 2.5 * unif(rng);
    const double alpha = -0.9 + 2.0 * unif(rng);
    const auto n = static_cast<std::int64_t>(1 + 199 * unif(rng));
    const std::size_t p = 1 + trial % 3;
    std::vector<double> radii, u;
    double r = 0.0;
    for (std::size_t l = 0; l < p; ++l) {
      r += 0.1 + 0.5 * unif(rng);
      radii.push_back(r);
      u.push_back(-1.0 + 2.0 * unif(rng));
    }
    const auto disks = fixed_disks(radii, u);
    const EnsembleParams params{b, alpha, n};
    const auto prof = exact::bernoulli_profile(params, disks);
    const auto omega = jump_weights(u);
    long double log_prod = 0;
    for (std::size_t j = 0; j < static_cast<std::size_t>(n); ++j) {
      long double f = 1;
      for (std::size_t l = 0; l < p; ++l) f += omega[l] * prof.P(j, l);
      log_prod += std::log(f);
    }
    const double got = exact::log_mgf_exact(params, disks);
    CHECK(std::abs(std::expm1(got - static_cast<double>(log_prod))) < 1e-12);
  }
}

TEST_CASE("larger weight on the outer disk never lowers the MGF") {
  const EnsembleParams params{1.0, 0.0, 80};
  double prev = -INFINITY;
  for (double u2 = 0.0; u2 <= 2.0; u2 += 0.25) {
    const double v = exact::log_mgf_exact(params, fixed_disks({0.4, 0.8}, {0.5, u2}));
    CHECK(v >= prev);
    prev = v;
  }
}

TEST_CASE("log partition function") {
  CHECK(std::abs(exact::log_partition_exact({1.0, 0.0, 1}) - std::log(std::numbers::pi)) < 1e-15);
  for (double b : {0.5, 1.7, 3.0}) {
    for (double alpha : {-0.5, 0.0, 2.0}) {
      const double expect = std::log(std::numbers::pi * std::tgamma((1 + alpha) / b) / b);
      CHECK(std::abs(exact::log_partition_exact({b, alpha, 1}) - expect) < 1e-14 * std::max(1.0, std::abs(expect)));
    }
  }
  // Exact lgamma summation at 50 digits (tests/oracles/small_n.py).
  CHECK(std::abs(exact::log_partition_exact({2.0, 0.5, 50}) - -1400.5566362527940748) < 1e-11);
}

TEST_CASE("first and second cumulants in closed form") {
  const EnsembleParams params{1.0, 0.0, 60};
  const auto disks = fixed_disks({0.55, 0.85}, {0.0, 0.0});
  const auto prof = exact::bernoulli_profile(params, disks);
  const std::vector<MultiIndex> orders = {{1, 0}, {0, 1}, {2, 0}, {0, 2}, {1, 1}};
  const auto k = exact::joint_cumulants_exact(params, disks, orders);
  double m1 = 0, m2 = 0, v1 = 0, v2 = 0, c12 = 0;
  for (std::size_t j = 0; j < 60; ++j) {
    m1 += prof.P(j, 0);
    m2 += prof.P(j, 1);
    v1 += prof.P(j, 0) * prof.Q(j, 0);
    v2 += prof.P(j, 1) * prof.Q(j, 1);
    c12 += prof.P(j, 0) * prof.Q(j, 1);
  }
  CHECK(k[0] == doctest::Approx(m1).epsilon(1e-14));
  CHECK(k[1] == doctest::Approx(m2).epsilon(1e-14));
  CHECK(k[2] == doctest::Approx(v1).epsilon(1e-14));
  CHECK(k[3] == doctest::Approx(v2).epsilon(1e-14));
  CHECK(k[4] == doctest::Approx(c12).epsilon(1e-14));
}

TEST_CASE("orders 1 and 2 agree with complex-step and contour derivatives") {
  const EnsembleParams params{1.4, 0.25, 50};
  const auto disks = fixed_disks({0.6, 0.8}, {0.0, 0.0});
  const auto prof = exact::bernoulli_profile(params, disks);
  const std::vector<MultiIndex> orders = {{1, 0}, {0, 1}, {2, 0}, {0, 2}, {1, 1}};
  const auto k = exact::joint_cumulants_exact(params, disks, orders);
  const double h = 1e-20;
  for (std::size_t l = 0; l < 2; ++l) {
    std::vector<cplx> u(2, 0.0);
    u[l] = cplx(0.0, h);
    const double d1 = exact::log_mgf_from_profile<cplx>(prof, u).imag() / h;
    CHECK(std::abs(d1 - k[l]) <= 1e-10 * std::max(1.0, std::abs(k[l])));
  }
  const double d11 = directional_derivative(prof, {1, 0}, 2);
  const double d22 = directional_derivative(prof, {0, 1}, 2);
  const double dsum = directional_derivative(prof, {1, 1}, 2);
  CHECK(std::abs(d11 - k[2]) <= 1e-10 * std::max(1.0, k[2]));
  CHECK(std::abs(d22 - k[3]) <= 1e-10 * std::max(1.0, k[3]));
  CHECK(std::abs((dsum - d11 - d22) / 2 - k[4]) <= 1e-10);
}

TEST_CASE("orders 3 to 6 agree with exact convolution of the counting law") {
  // Several weightings a of the disk counts: the order-k cumulant of a.N is
  // sum over |nu| = k of multinomial(k; nu) a^nu kappa_nu.
  struct Setup {
    EnsembleParams params;
    std::vector<double> radii;
  };
  const std::vector<Setup> setups = {{{1.0, 0.0, 20}, {0.5, 0.9}},
                                     {{0.7, 0.5, 16}, {0.05, 1.3}},
                                     {{2.0, -0.4, 12}, {0.7, 0.75}}};
  const std::vector<std::vector<int>> combos = {{1, 0}, {0, 1}, {1, 1}, {1, 2}, {2, -1}, {-1, 3}};
  for (const auto& setup : setups) {
    const auto disks = fixed_disks(setup.radii, {0.0, 0.0});
    const auto prof = exact::bernoulli_profile(setup.params, disks);
    std::vector<MultiIndex> orders;
    for (int k = 1; k <= 6; ++k) {
      for (int i = 0; i <= k; ++i) orders.push_back({i, k - i});
    }
    const auto kappa = exact::joint_cumulants_from_profile(prof, orders);
    for (const auto& a : combos) {
      // Particle in annulus 0 is in both disks, annulus 1 only in disk 2.
      const auto ref = convolution_cumulants(prof, {a[0] + a[1], a[1], 0});
      std::size_t idx = 0;
      for (int k = 1; k <= 6; ++k) {
        long double predicted = 0;
        for (int i = 0; i <= k; ++i, ++idx) {
          const long double binom = std::tgamma(k + 1.0L) / (std::tgamma(i + 1.0L) * std::tgamma(k - i + 1.0L));
          predicted += binom * std::pow(static_cast<long double>(a[0]), i) *
                       std::pow(static_cast<long double>(a[1]), k - i) * kappa[idx];
        }
        const long double scale = std::max<long double>(1.0L, std::abs(ref[k - 1]));
        CHECK_MESSAGE(std::abs(predicted - ref[k - 1]) <= 1e-9L * scale * std::pow(4.0L, k),
                      "order " << k << " combo " << a[0] << "," << a[1]);
      }
    }
  }
}

TEST_CASE("cumulant order validation") {
  const EnsembleParams params{1.0, 0.0, 10};
  const auto disks = fixed_disks({0.5, 0.8}, {0.0, 0.0});
  CHECK_THROWS_AS(exact::joint_cumulants_exact(params, disks, std::vector<MultiIndex>{{4, 3}}), OrderError);
  CHECK_THROWS_AS(exact::joint_cumulants_exact(params, disks, std::vector<MultiIndex>{{1}}), ConfigError);
  CHECK_THROWS_AS(exact::joint_cumulants_exact(params, disks, std::vector<MultiIndex>{{0, 0}}), ConfigError);
  CHECK_THROWS_AS(exact::joint_cumulants_exact(params, disks, std::vector<MultiIndex>{{-1, 2}}), ConfigError);
  CHECK_NOTHROW(exact::joint_cumulants_exact(params, disks, std::vector<MultiIndex>{{3, 3}}));
}

TEST_CASE("mean and covariance") {
  {
    const auto mv = exact::mean_var_exact({1.0, 0.0, 1}, fixed_disks({0.8}, {0.0}));
    const double P = 1 - std::exp(-0.64);
    CHECK(mv.means[0] == doctest::Approx(P).epsilon(1e-15));
    CHECK(mv.cov(0, 0) == doctest::Approx(P * (1 - P)).epsilon(1e-14));
  }
  {
    // Leading order r sqrt(n / pi); the next term is O(n^{-1/2}).
    const auto mv = exact::mean_var_exact({1.0, 0.0, 1000}, fixed_disks({0.6}, {0.0}));
    CHECK(std::abs(mv.cov(0, 0) - 0.6 * std::sqrt(1000 / std::numbers::pi)) < 0.01);
  }
  {
    const auto mv = exact::mean_var_exact({1.2, 0.3, 200}, fixed_disks({0.3, 0.6, 0.85}, {0.7, 0.1, 0.2}));
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t k = 0; k < 3; ++k) CHECK(mv.cov(i, k) == mv.cov(k, i));
    }
    // Nested counts: every 2x2 principal minor is non-negative.
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t k = i + 1; k < 3; ++k) CHECK(mv.cov(i, i) * mv.cov(k, k) - mv.cov(i, k) * mv.cov(i, k) >= 0.0);
    }
  }
}

TEST_CASE("disk system validation") {
  const EnsembleParams params{1.0, 0.0, 100};
  CHECK_THROWS_AS(fixed_disks({0.5, 0.5}, {0, 0}).resolve(params), ConfigError);
  CHECK_THROWS_AS(fixed_disks({0.5, 0.5 * (1 + 1e-13)}, {0, 0}).resolve(params), ConfigError);
  CHECK_THROWS_AS(fixed_disks({0.7, 0.5}, {0, 0}).resolve(params), ConfigError);
  DiskSystem two_edges;
  two_edges.add(Disk::edge(-0.5));
  two_edges.add(Disk::edge(0.5));
  CHECK_THROWS_AS(two_edges.resolve(params), ConfigError);
  DiskSystem bad_edge;
  bad_edge.add(Disk::edge(-10.0));  // 1 + sqrt(2) s / 10 < 0
  CHECK_THROWS_AS(bad_edge.resolve(params), ConfigError);
  CHECK_THROWS_AS(exact::log_mgf_exact({-1.0, 0.0, 10}, fixed_disks({0.5}, {1})), ConfigError);
  CHECK_THROWS_AS(exact::log_mgf_exact({1.0, -1.0, 10}, fixed_disks({0.5}, {1})), ConfigError);
}
