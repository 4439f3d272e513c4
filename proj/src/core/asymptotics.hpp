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

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <span>
#include <type_traits>
#include <vector>

#include "ensemble.hpp"
#include "error.hpp"
#include "quadrature.hpp"
#include "specfun.hpp"

// Large-n predictions: the building blocks
//   F(t, s) = log(1 + (s - 1) erfc(t) / 2),   G(t, s) = dF/dt,
// the coefficients of log E[...] = C1 n + C2 sqrt(n) + C3 + C4 / sqrt(n) + ...,
// and the per-order cumulant coefficients derived from them.
namespace mlcount::asymptotics {

// Semi-infinite integrals are cut at |t| = sqrt(-log(tol)) + 2 with tol = 1e-16;
// every integrand carries a factor erfc(|t|) or exp(-t^2) there.
inline constexpr double kTailTolerance = 1e-16;
double truncation_point();
// Edge parameters beyond this size make the Gaussian factors underflow; the
// predictions are still returned but flagged.
inline constexpr double kEdgeFlagThreshold = 6.0;

quadrature::Options default_quadrature();

template <class S>
S F_func(double t, S s) {
  const double e = specfun::erfc(t);
  if constexpr (std::is_same_v<S, double>) {
    const double arg = 1.0 + (s - 1.0) * e / 2.0;
    if (!(arg > 0.0)) throw DomainError("F(t, s): log argument is not positive (s must be > 0)");
    return std::log1p((s - 1.0) * e / 2.0);
  } else {
    return std::log(S(1.0) + (s - 1.0) * (e / 2.0));
  }
}

template <class S>
S G_func(double t, S s) {
  const double e = specfun::erfc(t);
  const double gauss = std::exp(-t * t) / std::sqrt(std::numbers::pi);
  if constexpr (std::is_same_v<S, double>) {
    const double arg = 1.0 + (s - 1.0) * e / 2.0;
    if (!(arg > 0.0)) throw DomainError("G(t, s): s must be > 0");
    return (1.0 - s) / arg * gauss;
  } else {
    return (S(1.0) - s) / (S(1.0) + (s - 1.0) * (e / 2.0)) * gauss;
  }
}

// u-derivatives at u = 0 of F(t, e^{+u}), F(t, e^{-u}), G(t, e^{u}) and
// G(t, e^{u})^2, by exact recursion. With p = erfc(t)/2, F(t, e^u) is the
// cumulant generating function of a Bernoulli(p) variable, so the j-th
// derivative is the Bernoulli cumulant kappa_j(p); for j >= 2 it factors as
// p (1 - p) R_j(p) with R_2 = 1 and R_{j+1} = (1 - 2p) R_j + p (1 - p) R_j'.
class UDerivatives {
 public:
  static constexpr int kMaxOrder = 8;
  UDerivatives();

  double F_plus(int j, double t) const;
  double F_minus(int j, double t) const;
  double G(int j, double t) const;
  double G_squared(int j, double t) const;

 private:
  double bernoulli_cumulant(int j, double p, double q) const;
  double kappa_prime(int j, double p) const;
  std::vector<std::vector<double>> R_;  // R_[j] polynomial coefficients in p
};

const UDerivatives& u_derivatives();

template <class S>
struct DiskContributionT {
  std::size_t index = 0;
  DiskRegime regime = DiskRegime::Bulk;
  double r_or_s = 0.0;
  S C1{}, C2{}, C3{}, C4{};
  double quad_error = 0.0;
};

template <class S>
struct ExpansionCoefficientsT {
  S C1{}, C2{}, C3{}, C4{};
  double quad_error = 0.0;
  bool edge_extreme = false;  // |s| > kEdgeFlagThreshold
  std::vector<DiskContributionT<S>> per_disk;
};

using DiskContribution = DiskContributionT<double>;
using ExpansionCoefficients = ExpansionCoefficientsT<double>;

// Coefficients at weights u for a classified configuration. Instantiated for
// double and std::complex<double> (complex u is used only by the tests).
template <class S>
ExpansionCoefficientsT<S> theorem_coefficients_at(double b, double alpha, std::span<const DiskClass> classes,
                                                  std::span<const S> u, const quadrature::Options& opt);

ExpansionCoefficients theorem_coefficients(double b, double alpha, const DiskSystem& disks,
                                           const quadrature::Options& opt = default_quadrature());
ExpansionCoefficients theorem_coefficients(const EnsembleParams& params, const DiskSystem& disks,
                                           const quadrature::Options& opt = default_quadrature());

double evaluate(const ExpansionCoefficients& c, std::int64_t n);
double predict_log_mgf(const EnsembleParams& params, const DiskSystem& disks,
                       const quadrature::Options& opt = default_quadrature());

// kappa_j = leading n + c sqrt(n) + d + e / sqrt(n) + O((log n)^2 / n).
struct CumulantSeries {
  DiskRegime regime = DiskRegime::Bulk;
  int order = 1;
  double leading = 0.0;
  double c = 0.0;
  double d = 0.0;
  double e = 0.0;
  double quad_error = 0.0;

  double evaluate(std::int64_t n) const;
};

inline constexpr int kMaxSeriesOrder = 6;

CumulantSeries bulk_cumulant_coeffs(int j, double b, double alpha, double r,
                                    const quadrature::Options& opt = default_quadrature());
CumulantSeries edge_cumulant_coeffs(int j, double b, double alpha, double s,
                                    const quadrature::Options& opt = default_quadrature());
// Integration-by-parts closed forms, orders 1 and 2 only.
CumulantSeries edge_cumulant_closed_form(int j, double b, double alpha, double s);
CumulantSeries outside_cumulant_coeffs(int j);

// Dispatch on the classification of a single disk.
CumulantSeries cumulant_coeffs(int j, double b, double alpha, const DiskClass& cls,
                               const quadrature::Options& opt = default_quadrature());

// Large-n expansion of log Z_n through O(1). The constant g(b, alpha) is
// available when b = n1 / n2 with n1, n2 <= cap.
struct ZnOptions {
  int rational_cap = 64;
  bool require_constant = false;  // ConfigError instead of omitting g
};

struct ZnExpansion {
  std::int64_t n = 0;
  bool has_constant = false;
  int n1 = 0;
  int n2 = 0;
  double constant = 0.0;
  long double exact = 0.0L;
  long double expansion = 0.0L;
  long double residual() const { return exact - expansion; }
};

struct RationalB {
  bool found = false;
  int n1 = 0;
  int n2 = 0;
};

RationalB rational_b(double b, int cap);
double zn_constant(double b, double alpha, int n1, int n2);
ZnExpansion zn_expansion(const EnsembleParams& params, const ZnOptions& opt = {});

}  // namespace mlcount::asymptotics
