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
#include "specfun.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "error.hpp"

namespace mlcount::specfun {

const char* to_string(GammaRegime regime) {
  switch (regime) {
    case GammaRegime::SeriesSmallZ: return "series";
    case GammaRegime::ContinuedFraction: return "continued_fraction";
    case GammaRegime::TemmeUniform: return "temme";
    case GammaRegime::FixedALargeZ: return "fixed_a_large_z";
  }
  return "unknown";
}

double erfc(double t) {
  if (std::isnan(t)) throw DomainError("erfc: argument is NaN");
  return std::erfc(t);
}

double log_gamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw DomainError("log_gamma: argument must be finite and > 0, got " + std::to_string(x));
  }
#if defined(__GLIBC__)
  int sign = 0;
  return ::lgamma_r(x, &sign);
#else
  return std::lgamma(x);
#endif
}

namespace detail {

double log1pmx_neg(double x) {
  if (std::abs(x) < 0.3) {
    // x^2/2 - x^3/3 + x^4/4 - ...
    double power = x * x;
    double sum = 0.0;
    for (int k = 2; k < 80; ++k) {
      const double term = power / k;
      sum += (k % 2 == 0) ? term : -term;
      if (std::abs(term) < 1e-17 * std::abs(sum)) break;
      power *= x;
    }
    return sum;
  }
  return x - std::log1p(x);
}

double stirling_remainder(double a) {
  if (a < 10.0) {
    return log_gamma(a) - ((a - 0.5) * std::log(a) - a + 0.5 * std::log(2.0 * std::numbers::pi));
  }
  // Sum of B_{2k} / (2k (2k - 1) a^{2k-1}), k = 1..7.
  static constexpr std::array<double, 7> coeffs = {
      1.0 / 12.0,  -1.0 / 360.0,  1.0 / 1260.0, -1.0 / 1680.0,
      1.0 / 1188.0, -691.0 / 360360.0, 1.0 / 156.0};
  const double inv = 1.0 / a;
  const double inv2 = inv * inv;
  double sum = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) sum = sum * inv2 + *it;
  return sum * inv;
}

namespace {

// Taylor coefficients about eta = 0 of
//   c0(eta) = 1/(lambda - 1) - 1/eta,
//   c1(eta) = 1/eta^3 - 1/(lambda-1)^3 - 1/(lambda-1)^2 - 1/(12 (lambda-1)),
// from series reversion of eta^2/2 = lambda - 1 - log(lambda) (sympy, exact
// rationals; tests/oracles/temme_series.py).
constexpr std::array<double, 10> kC0Taylor = {
    -1.0 / 3.0,         1.0 / 12.0,          -2.0 / 135.0,         1.0 / 864.0,
    1.0 / 2835.0,       -139.0 / 777600.0,   1.0 / 25515.0,        -571.0 / 261273600.0,
    -281.0 / 151559100.0, 163879.0 / 197522841600.0};
constexpr std::array<double, 9> kC1Taylor = {
    -1.0 / 540.0,      -1.0 / 288.0,         1.0 / 378.0,           -77.0 / 77760.0,
    1.0 / 4860.0,      -1.0 / 2488320.0,     -2743.0 / 151559100.0, 41969.0 / 5486745600.0,
    -11.0 / 6823440.0};

template <std::size_t N>
double horner(const std::array<double, N>& c, double x) {
  double acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
  return acc;
}

}  // namespace

double temme_c0(EtaValue v) {
  if (std::abs(v.eta) < kTemmeCoeffSeriesSwitch) return horner(kC0Taylor, v.eta);
  return 1.0 / (v.lambda - 1.0) - 1.0 / v.eta;
}

double temme_c1(EtaValue v) {
  if (std::abs(v.eta) < kTemmeCoeffSeriesSwitch) return horner(kC1Taylor, v.eta);
  const double x = v.lambda - 1.0;
  return 1.0 / (v.eta * v.eta * v.eta) - 1.0 / (x * x * x) - 1.0 / (x * x) - 1.0 / (12.0 * x);
}

}  // namespace detail

EtaValue eta_of_lambda(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw DomainError("eta_of_lambda: lambda must be finite and > 0");
  }
  const double x = lambda - 1.0;
  if (std::abs(x) < kEtaSeriesSwitch) {
    // eta = x (1 - x/3 + 7x^2/36 - 73x^3/540 + ...); tests/oracles/eta_series.py
    static constexpr std::array<double, 7> c = {
        1.0, -1.0 / 3.0, 7.0 / 36.0, -73.0 / 540.0, 1331.0 / 12960.0,
        -22409.0 / 272160.0, 372571.0 / 5443200.0};
    double acc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
    return {x * acc, lambda};
  }
  const double phi = detail::log1pmx_neg(x);
  const double eta = std::sqrt(2.0 * phi);
  return {x < 0.0 ? -eta : eta, lambda};
}

double temme_R(double a, EtaValue eta) {
  if (!(a >= kTemmeMinA)) {
    throw DomainError("temme_R: a = " + std::to_string(a) + " is below the uniform-expansion threshold");
  }
  const double gauss = std::exp(-0.5 * a * eta.eta * eta.eta) / std::sqrt(2.0 * std::numbers::pi * a);
  return gauss * (detail::temme_c0(eta) + detail::temme_c1(eta) / a);
}

}  // namespace mlcount::specfun
