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
#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "error.hpp"
#include "specfun.hpp"

namespace mlcount::specfun {
namespace {

void check_arguments(double a, double z) {
  if (!(a > 0.0) || !std::isfinite(a)) {
    throw DomainError("incomplete gamma: a must be finite and > 0, got " + std::to_string(a));
  }
  if (!(z >= 0.0)) throw DomainError("incomplete gamma: z must be >= 0, got " + std::to_string(z));
}

// log(z^a e^{-z} / Gamma(a + 1)) written as -a phi(lambda) - mu(a) - log(2 pi a)/2
// so that the O(a log a) terms cancel analytically instead of in floating point.
double log_series_prefactor(double a, double z) {
  const double x = (z - a) / a;
  return -a * detail::log1pmx_neg(x) - detail::stirling_remainder(a) -
         0.5 * std::log(2.0 * std::numbers::pi * a);
}

GammaPair clamp(GammaPair g) {
  g.lower = std::clamp(g.lower, 0.0, 1.0);
  g.upper = std::clamp(g.upper, 0.0, 1.0);
  return g;
}

constexpr int kMaxIterations = 200000;

}  // namespace

namespace detail {

GammaPair lower_series(double a, double z) {
  if (z == 0.0) return {0.0, 1.0, GammaRegime::SeriesSmallZ};
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < kMaxIterations; ++k) {
    term *= z / (a + k);
    sum += term;
    if (term < 1e-17 * sum) {
      const double p = std::exp(log_series_prefactor(a, z)) * sum;
      return clamp({p, 1.0 - p, GammaRegime::SeriesSmallZ});
    }
  }
  throw NumericalFault("incomplete gamma series did not converge");
}

GammaPair upper_continued_fraction(double a, double z) {
  // Legendre continued fraction for Gamma(a, z), modified Lentz evaluation.
  constexpr double tiny = 1e-300;
  double b = z + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxIterations; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 4e-16) {
      const double q = std::exp(log_series_prefactor(a, z) + std::log(a)) * h;
      return clamp({1.0 - q, q, GammaRegime::ContinuedFraction});
    }
  }
  throw NumericalFault("incomplete gamma continued fraction did not converge");
}

GammaPair temme_uniform(double a, double z) {
  if (z == 0.0) return {0.0, 1.0, GammaRegime::TemmeUniform};
  const EtaValue eta = eta_of_lambda(z / a);
  const double scaled = eta.eta * std::sqrt(0.5 * a);
  const double gauss = std::exp(-0.5 * a * eta.eta * eta.eta) / std::sqrt(2.0 * std::numbers::pi * a);
  const double r = gauss * (temme_c0(eta) + temme_c1(eta) / a);
  return clamp({0.5 * std::erfc(-scaled) - r, 0.5 * std::erfc(scaled) + r, GammaRegime::TemmeUniform});
}

}  // namespace detail

GammaRegime gamma_regime(double a, double z) {
  check_arguments(a, z);
  if (a >= kTemmeMinA) return GammaRegime::TemmeUniform;
  if (z < a + 1.0) return GammaRegime::SeriesSmallZ;
  if (std::isinf(z)) return GammaRegime::FixedALargeZ;
  // Gamma(a, z) <= z^{a-1} e^{-z} / (1 - (a-1)/z) for z > a - 1.
  const double log_bound = log_series_prefactor(a, z) + std::log(a) - std::log(z) -
                           std::log1p(-std::max(0.0, a - 1.0) / z);
  if (log_bound < std::log(kNegligibleTail)) return GammaRegime::FixedALargeZ;
  return GammaRegime::ContinuedFraction;
}

GammaPair reg_gamma_pair(double a, double z) {
  switch (gamma_regime(a, z)) {
    case GammaRegime::SeriesSmallZ: return detail::lower_series(a, z);
    case GammaRegime::ContinuedFraction: return detail::upper_continued_fraction(a, z);
    case GammaRegime::TemmeUniform: return detail::temme_uniform(a, z);
    case GammaRegime::FixedALargeZ: return {1.0, 0.0, GammaRegime::FixedALargeZ};
  }
  throw NumericalFault("unreachable gamma regime");
}

double reg_lower_gamma(double a, double z) { return reg_gamma_pair(a, z).lower; }

}  // namespace mlcount::specfun
