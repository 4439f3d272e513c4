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

// Scalar special functions used by the exact engine and the asymptotic
// formulas: erfc, log-gamma, the regularized lower incomplete gamma function
// P(a, z) with Temme's uniform expansion for large a, the eta mapping, and
// log Barnes G. All functions are pure.

namespace mlcount::specfun {

enum class GammaRegime { SeriesSmallZ, ContinuedFraction, TemmeUniform, FixedALargeZ };

const char* to_string(GammaRegime regime);

// Temme's transformation variable for lambda = z / a:
//   eta^2 / 2 = lambda - 1 - log(lambda),  sign(eta) = sign(lambda - 1).
struct EtaValue {
  double eta = 0.0;
  double lambda = 1.0;
};

// P(a, z) and Q(a, z) = 1 - P(a, z), each to absolute accuracy ~1e-14, with the
// regime that produced them.
struct GammaPair {
  double lower = 0.0;
  double upper = 1.0;
  GammaRegime regime = GammaRegime::SeriesSmallZ;
};

// Regime boundaries. Temme's expansion is truncated after c0 and c1, so it is
// only used where the first omitted term, c2(0) / (sqrt(2 pi) a^2.5), stays
// below 5e-14.
inline constexpr double kTemmeMinA = 2.0e4;
inline constexpr double kEtaSeriesSwitch = 1e-3;
inline constexpr double kTemmeCoeffSeriesSwitch = 1e-2;
// Q(a, z) below this bound is returned as exactly 0 in the FixedALargeZ regime.
inline constexpr double kNegligibleTail = 1e-18;

double erfc(double t);
double log_gamma(double x);
EtaValue eta_of_lambda(double lambda);

// R_a(eta) ~ exp(-a eta^2 / 2) / sqrt(2 pi a) * (c0(eta) + c1(eta) / a).
// Requires a >= kTemmeMinA.
double temme_R(double a, EtaValue eta);

GammaRegime gamma_regime(double a, double z);
GammaPair reg_gamma_pair(double a, double z);
double reg_lower_gamma(double a, double z);

double log_barnes_g(double z);

// Glaisher-Kinkelin: zeta'(-1) = 1/12 - log A (mpmath, 50 digits, truncated).
inline constexpr double kZetaPrimeMinusOne = -0.16542114370045092921391966024278;

namespace detail {

// x - log(1 + x), accurate for x near 0.
double log1pmx_neg(double x);

// log Gamma(a) - [(a - 1/2) log a - a + log(2 pi) / 2].
double stirling_remainder(double a);

double temme_c0(EtaValue eta);
double temme_c1(EtaValue eta);

// Individual evaluators without regime dispatch or threshold checks, exposed
// for boundary-continuity tests.
GammaPair lower_series(double a, double z);
GammaPair upper_continued_fraction(double a, double z);
GammaPair temme_uniform(double a, double z);

}  // namespace detail
}  // namespace mlcount::specfun
