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
#include <cmath>
#include <numbers>
#include <string>

#include "asymptotics.hpp"

namespace mlcount::asymptotics {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSqrt2 = std::numbers::sqrt2;

void check_order(int j) {
  if (j < 1 || j > kMaxSeriesOrder) {
    throw OrderError("cumulant order " + std::to_string(j) + " is outside 1.." + std::to_string(kMaxSeriesOrder));
  }
}

struct Accumulator {
  const quadrature::Options& opt;
  double error = 0.0;

  template <class F>
  double operator()(double weight, F&& f, double a, double b, std::vector<double> breaks = {}) {
    if (weight == 0.0) return 0.0;
    auto r = quadrature::integrate(f, a, b, opt, std::move(breaks));
    error += std::abs(weight) * r.error;
    return weight * r.value;
  }
};

}  // namespace

double CumulantSeries::evaluate(std::int64_t n) const {
  const double nn = static_cast<double>(n);
  const double rt = std::sqrt(nn);
  return leading * nn + c * rt + d + e / rt;
}

CumulantSeries bulk_cumulant_coeffs(int j, double b, double alpha, double r, const quadrature::Options& opt) {
  check_order(j);
  validate_shape(b, alpha);
  if (!(r > 0.0 && r < critical_radius(b))) throw ConfigError("bulk radius must lie in (0, b^{-1/(2b)})");
  const auto& D = u_derivatives();
  const double T = truncation_point();
  const double rb = std::pow(r, b);
  Accumulator I{opt};
  auto even = [&](double t) { return D.F_plus(j, t) + D.F_minus(j, t); };
  auto odd = [&](double t) { return D.F_plus(j, t) - D.F_minus(j, t); };
  auto q3 = [](double t) { return (5.0 * t * t - 1.0) / 3.0; };

  CumulantSeries out;
  out.regime = DiskRegime::Bulk;
  out.order = j;
  out.leading = j == 1 ? b * rb * rb : 0.0;
  out.c = I(kSqrt2 * b * rb, even, 0.0, T);
  out.d = (j == 1 ? -0.5 - alpha : 0.0) + I(4.0 * b, [&](double t) { return t * odd(t); }, 0.0, T) +
          I(b, [&](double t) { return D.G(j, t) * q3(t); }, -T, T, {0.0});
  out.e = I(6.0 * kSqrt2 * b / rb, [&](double t) { return t * t * even(t); }, 0.0, T) +
          I(-b / rb,
            [&](double t) {
              const double t3 = t * t * t;
              return D.G(j, t) * (21.0 * t - 193.0 * t3 + 50.0 * t3 * t * t) / (18.0 * kSqrt2);
            },
            -T, T, {0.0}) +
          I(-b / (2.0 * kSqrt2 * rb), [&](double t) { return D.G_squared(j, t) * q3(t) * q3(t); }, -T, T, {0.0});
  out.quad_error = I.error;
  return out;
}

CumulantSeries edge_cumulant_coeffs(int j, double b, double alpha, double s, const quadrature::Options& opt) {
  check_order(j);
  validate_shape(b, alpha);
  const auto& D = u_derivatives();
  const double T = truncation_point();
  const double lo = std::min(-T, -s);
  const double sb = std::sqrt(b);
  const double s2b = std::sqrt(2.0 * b);
  Accumulator I{opt};
  auto Fm = [&](double t) { return D.F_minus(j, t); };
  auto Fp = [&](double t) { return D.F_plus(j, t); };
  auto q3 = [s](double t) { return (5.0 * t * t + 3.0 * s * t - 1.0) / 3.0; };

  CumulantSeries out;
  out.regime = DiskRegime::Edge;
  out.order = j;
  out.leading = j == 1 ? 1.0 : 0.0;
  out.c = (j == 1 ? s2b * s : 0.0) + I(s2b, Fm, 0.0, T) + I(s2b, Fp, 0.0, -s);
  out.d = (0.5 + alpha) * D.F_minus(j, s) + I(-2.0 * b, [&](double t) { return (2.0 * t - s) * Fm(t); }, 0.0, T) +
          I(2.0 * b, [&](double t) { return (2.0 * t + s) * Fp(t); }, 0.0, -s) +
          I(b, [&](double t) { return D.G(j, t) * q3(t); }, lo, -s);
  const double k32 = std::pow(2.0 * b, 1.5);
  const double b32 = b * sb;
  const double boundary =
      (0.5 + alpha) * (2.0 * s * s - 1.0) / (3.0 * kSqrt2) * sb + (1.0 + 6.0 * alpha + 6.0 * alpha * alpha) / (12.0 * s2b);
  out.e = I(k32, [&](double t) { return (3.0 * t * t - 2.0 * s * t) * Fm(t); }, 0.0, T) +
          I(k32, [&](double t) { return (3.0 * t * t + 2.0 * s * t) * Fp(t); }, 0.0, -s) +
          I(-b32 / kSqrt2,
            [&](double t) {
              const double t2 = t * t;
              const double poly = 21.0 * t - 193.0 * t2 * t + 50.0 * t2 * t2 * t +
                                  6.0 * s * (1.0 - 29.0 * t2 + 10.0 * t2 * t2) - 9.0 * s * s * (3.0 * t - 2.0 * t2 * t);
              return D.G(j, t) * poly / 18.0;
            },
            lo, -s) +
          I(-b32 / (2.0 * kSqrt2), [&](double t) { return D.G_squared(j, t) * q3(t) * q3(t); }, lo, -s) +
          boundary * D.G(j, -s);
  out.quad_error = I.error;
  return out;
}

CumulantSeries edge_cumulant_closed_form(int j, double b, double alpha, double s) {
  validate_shape(b, alpha);
  if (j != 1 && j != 2) throw OrderError("edge closed forms exist for orders 1 and 2 only");
  const double sb = std::sqrt(b);
  const double b32 = b * sb;
  const double s2 = s * s;
  const double g = std::exp(-s2);
  const double g2 = std::exp(-2.0 * s2);
  const double E = specfun::erfc(s);
  const double E2 = specfun::erfc(kSqrt2 * s);
  const double rt2pi = std::sqrt(2.0 * kPi);
  const double rtpi = std::sqrt(kPi);

  CumulantSeries out;
  out.regime = DiskRegime::Edge;
  out.order = j;
  if (j == 1) {
    out.leading = 1.0;
    out.c = sb * s / kSqrt2 * E - sb / rt2pi * g;
    out.d = -0.5 * (0.5 + alpha - b / 2.0) * E - b * s / (3.0 * rtpi) * g;
    out.e = g / rt2pi *
            ((b * (2.0 + 4.0 * alpha) - 1.0 - 6.0 * alpha - 6.0 * alpha * alpha) / (12.0 * sb) +
             (3.0 * b - 2.0 - 4.0 * alpha) * s2 / 6.0 * sb - 2.0 * s2 * s2 / 9.0 * b32);
  } else {
    // 1 - erfc(s) is erf(s); written that way to keep small-s accuracy.
    const double erf_s = std::erf(s);
    out.c = sb / (2.0 * rtpi) * E2 + sb * g / rt2pi * erf_s + sb * s / kSqrt2 * E * (0.5 * E - 1.0);
    out.d = -b / (12.0 * kPi) * g2 + b * s / (2.0 * rt2pi) * E2 + b * s / (3.0 * rtpi) * g * erf_s +
            (b - 1.0 - 2.0 * alpha) / 4.0 * E * (0.5 * E - 1.0);
    out.e = g / (12.0 * std::sqrt(2.0 * kPi * b)) *
                (1.0 - 2.0 * b + 6.0 * alpha - 4.0 * b * alpha + 6.0 * alpha * alpha +
                 2.0 * (2.0 - 3.0 * b + 4.0 * alpha) * b * s2 + 8.0 * b * b / 3.0 * s2 * s2) *
                erf_s -
            b32 * s / (72.0 * kSqrt2 * kPi) * g2 - b32 * (1.0 + 4.0 * s2) / (32.0 * rtpi) * E2;
  }
  return out;
}

CumulantSeries outside_cumulant_coeffs(int j) {
  check_order(j);
  CumulantSeries out;
  out.regime = DiskRegime::Outside;
  out.order = j;
  out.leading = j == 1 ? 1.0 : 0.0;
  return out;
}

CumulantSeries cumulant_coeffs(int j, double b, double alpha, const DiskClass& cls, const quadrature::Options& opt) {
  switch (cls.regime) {
    case DiskRegime::Bulk:
      return bulk_cumulant_coeffs(j, b, alpha, cls.r_or_s, opt);
    case DiskRegime::Edge:
      return edge_cumulant_coeffs(j, b, alpha, cls.r_or_s, opt);
    case DiskRegime::Outside:
      break;
  }
  validate_shape(b, alpha);
  return outside_cumulant_coeffs(j);
}

}  // namespace mlcount::asymptotics
