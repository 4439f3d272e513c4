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

// Exact finite-n evaluation. Rotation invariance reduces the joint moment
// generating function of the disk counts to a product over j = 1..n of
//   1 + sum_l omega_l P((j + alpha)/b, n r_l^{2b}),
// i.e. to n independent categorical variables: particle j sits in annulus k
// with probability q[j][k].

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include "ensemble.hpp"
#include "error.hpp"
#include "parallel.hpp"

namespace mlcount::exact {

inline constexpr int kMaxCumulantOrder = 6;

struct BernoulliProfile {
  std::int64_t n = 0;
  std::size_t p = 0;
  std::vector<double> radii;
  std::vector<double> lower;  // row-major n x p, P[j][l] for particle j+1
  std::vector<double> upper;  // 1 - P[j][l], evaluated directly

  double P(std::size_t j, std::size_t l) const { return lower[j * p + l]; }
  double Q(std::size_t j, std::size_t l) const { return upper[j * p + l]; }
  // Probability that particle j+1 lies in annulus k, k = 0..p (annulus p is
  // outside the largest disk).
  double annulus(std::size_t j, std::size_t k) const;
};

BernoulliProfile bernoulli_profile(const EnsembleParams& params, const DiskSystem& disks, Parallelism par = {});

namespace detail {

inline double real_part(double v) { return v; }
inline double real_part(const std::complex<double>& v) { return v.real(); }

// Kahan-Babuska (Neumaier) accumulator.
template <class T>
struct CompensatedSum {
  T sum{};
  T carry{};
  void add(const T& x) {
    const T t = sum + x;
    if (std::abs(real_part(sum)) >= std::abs(real_part(x))) {
      carry += (sum - t) + x;
    } else {
      carry += (x - t) + sum;
    }
    sum = t;
  }
  T value() const { return sum + carry; }
};

}  // namespace detail

// log E[prod_l exp(u_l N(D_{r_l}))] for a precomputed profile. Templated on
// the scalar so derivative checks can evaluate it at complex (or
// multicomplex) weights; production callers use the double overload.
template <class T>
T log_mgf_from_profile(const BernoulliProfile& prof, std::span<const T> u) {
  using std::exp;
  using std::log;
  using detail::real_part;
  if (u.size() != prof.p) throw ConfigError("log_mgf: weight count does not match profile");
  const std::size_t p = prof.p;
  // U[k] = u_k + ... + u_{p-1}; annulus k carries weight exp(U[k]).
  std::vector<T> U(p + 1, T{});
  for (std::size_t k = p; k-- > 0;) U[k] = U[k + 1] + u[k];
  detail::CompensatedSum<T> total;
  std::vector<double> q(p + 1);
  for (std::size_t j = 0; j < static_cast<std::size_t>(prof.n); ++j) {
    double shift = -INFINITY;
    for (std::size_t k = 0; k <= p; ++k) {
      q[k] = prof.annulus(j, k);
      if (q[k] > 0.0) shift = std::max(shift, real_part(U[k]));
    }
    T mix{};
    for (std::size_t k = 0; k <= p; ++k) {
      if (q[k] > 0.0) mix += q[k] * exp(U[k] - shift);
    }
    if constexpr (std::is_same_v<T, double>) {
      if (!(mix > 0.0)) throw NumericalFault("log_mgf: non-positive mixture for particle " + std::to_string(j + 1));
    }
    total.add(log(mix) + shift);
  }
  return total.value();
}

double log_mgf_from_profile(const BernoulliProfile& prof, std::span<const double> u);
double log_mgf_exact(const EnsembleParams& params, const DiskSystem& disks, Parallelism par = {});

// log Z_n = -(n^2/(2b)) log n - ((1+2 alpha)/(2b)) n log n + n log(pi/b)
//           + sum_{j=1}^n log Gamma((j+alpha)/b)
double log_partition_exact(const EnsembleParams& params);
long double log_partition_exact_extended(const EnsembleParams& params);

// Multi-index (k_1, ..., k_p) selecting the mixed derivative
// d^{k_1}/du_1^{k_1} ... d^{k_p}/du_p^{k_p} of the log-MGF at u = 0.
using MultiIndex = std::vector<int>;

std::vector<double> joint_cumulants_from_profile(const BernoulliProfile& prof, std::span<const MultiIndex> orders);
std::vector<double> joint_cumulants_exact(const EnsembleParams& params, const DiskSystem& disks,
                                          std::span<const MultiIndex> orders, Parallelism par = {});

// Marginal cumulant of order j for disk l.
MultiIndex marginal(std::size_t p, std::size_t l, int order);

struct MeanCovariance {
  std::size_t p = 0;
  std::vector<double> means;
  std::vector<double> covariance;  // row-major p x p
  double cov(std::size_t i, std::size_t k) const { return covariance[i * p + k]; }
};

MeanCovariance mean_var_from_profile(const BernoulliProfile& prof);
MeanCovariance mean_var_exact(const EnsembleParams& params, const DiskSystem& disks, Parallelism par = {});

}  // namespace mlcount::exact
