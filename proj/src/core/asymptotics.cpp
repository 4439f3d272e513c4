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
#include "asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

namespace mlcount::asymptotics {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSqrt2 = std::numbers::sqrt2;

std::vector<double> derivative(const std::vector<double>& poly) {
  std::vector<double> d(poly.size() > 1 ? poly.size() - 1 : 1, 0.0);
  for (std::size_t k = 1; k < poly.size(); ++k) d[k - 1] = static_cast<double>(k) * poly[k];
  return d;
}

double horner(const std::vector<double>& poly, double x) {
  double acc = 0.0;
  for (auto it = poly.rbegin(); it != poly.rend(); ++it) acc = acc * x + *it;
  return acc;
}

// d/dt of erfc(t)/2.
double p_prime(double t) { return -std::exp(-t * t) / std::sqrt(kPi); }

}  // namespace

double truncation_point() { return std::sqrt(-std::log(kTailTolerance)) + 2.0; }

quadrature::Options default_quadrature() { return {}; }

UDerivatives::UDerivatives() : R_(kMaxOrder + 2) {
  R_[2] = {1.0};
  for (int j = 2; j <= kMaxOrder; ++j) {
    const auto& r = R_[j];
    const auto dr = derivative(r);
    std::vector<double> next(r.size() + 1, 0.0);
    for (std::size_t k = 0; k < r.size(); ++k) {
      next[k] += r[k];
      next[k + 1] -= 2.0 * r[k];
    }
    for (std::size_t k = 0; k < dr.size(); ++k) {
      next[k + 1] += dr[k];
      next[k + 2] -= dr[k];
    }
    R_[j + 1] = std::move(next);
  }
}

double UDerivatives::bernoulli_cumulant(int j, double p, double q) const {
  if (j == 1) return p;
  return p * q * horner(R_[j], p);
}

// d kappa_j / dp = R_{j+1}(p) for every j >= 1.
double UDerivatives::kappa_prime(int j, double p) const { return horner(R_[j + 1], p); }

double UDerivatives::F_plus(int j, double t) const {
  if (j < 1 || j > kMaxOrder) throw OrderError("u-derivative order out of range");
  return bernoulli_cumulant(j, specfun::erfc(t) / 2.0, specfun::erfc(-t) / 2.0);
}

double UDerivatives::F_minus(int j, double t) const { return (j % 2 == 0 ? 1.0 : -1.0) * F_plus(j, t); }

double UDerivatives::G(int j, double t) const {
  if (j < 1 || j > kMaxOrder) throw OrderError("u-derivative order out of range");
  return kappa_prime(j, specfun::erfc(t) / 2.0) * p_prime(t);
}

double UDerivatives::G_squared(int j, double t) const {
  double acc = 0.0;
  double binom = 1.0;
  for (int i = 1; i < j; ++i) {
    binom = binom * (j - i + 1) / i;
    acc += binom * G(i, t) * G(j - i, t);
  }
  return acc;
}

const UDerivatives& u_derivatives() {
  static const UDerivatives table;
  return table;
}

namespace {

// Accumulates weighted integrals together with their error estimates.
template <class S>
struct Integrals {
  const quadrature::Options& opt;
  double error = 0.0;

  template <class F>
  S operator()(double weight, F&& f, double a, double b, std::vector<double> breaks = {}) {
    auto r = quadrature::integrate(f, a, b, opt, std::move(breaks));
    error += std::abs(weight) * r.error;
    return weight * r.value;
  }
};

template <class S>
DiskContributionT<S> bulk_contribution(double b, double alpha, double r, S u, const quadrature::Options& opt) {
  DiskContributionT<S> out;
  out.regime = DiskRegime::Bulk;
  out.r_or_s = r;
  const double T = truncation_point();
  const double rb = std::pow(r, b);
  const S sp = std::exp(u);
  const S sm = std::exp(-u);
  Integrals<S> I{opt};
  auto even = [&](double t) { return F_func(t, sp) + F_func(t, sm); };
  auto odd = [&](double t) { return F_func(t, sp) - F_func(t, sm); };
  auto q3 = [](double t) { return (5.0 * t * t - 1.0) / 3.0; };

  out.C1 = b * rb * rb * u;
  out.C2 = I(kSqrt2 * b * rb, even, 0.0, T);
  out.C3 = -(0.5 + alpha) * u + I(4.0 * b, [&](double t) { return t * odd(t); }, 0.0, T) +
           I(b, [&](double t) { return G_func(t, sp) * q3(t); }, -T, T, {0.0});
  out.C4 = I(6.0 * kSqrt2 * b / rb, [&](double t) { return t * t * even(t); }, 0.0, T) +
           I(-b / (kSqrt2 * rb),
             [&](double t) {
               const double t3 = t * t * t;
               return G_func(t, sp) * ((21.0 * t - 193.0 * t3 + 50.0 * t3 * t * t) / 18.0);
             },
             -T, T, {0.0}) +
           I(-b / (2.0 * kSqrt2 * rb),
             [&](double t) {
               const S g = G_func(t, sp) * q3(t);
               return g * g;
             },
             -T, T, {0.0});
  out.quad_error = I.error;
  return out;
}

template <class S>
DiskContributionT<S> edge_contribution(double b, double alpha, double s, S u, const quadrature::Options& opt) {
  DiskContributionT<S> out;
  out.regime = DiskRegime::Edge;
  out.r_or_s = s;
  const double T = truncation_point();
  const double lo = std::min(-T, -s);
  const S sp = std::exp(u);
  const S sm = std::exp(-u);
  const double sb = std::sqrt(b);
  const double s2b = std::sqrt(2.0 * b);
  Integrals<S> I{opt};
  auto Fm = [&](double t) { return F_func(t, sm); };
  auto Fp = [&](double t) { return F_func(t, sp); };
  auto q3 = [s](double t) { return (5.0 * t * t + 3.0 * s * t - 1.0) / 3.0; };

  out.C1 = u;
  out.C2 = I(s2b, Fm, 0.0, T) + s2b * s * u + I(s2b, Fp, 0.0, -s);
  out.C3 = (0.5 + alpha) * F_func(s, sm) + I(-2.0 * b, [&](double t) { return (2.0 * t - s) * Fm(t); }, 0.0, T) +
           I(2.0 * b, [&](double t) { return (2.0 * t + s) * Fp(t); }, 0.0, -s) +
           I(b, [&](double t) { return G_func(t, sp) * q3(t); }, lo, -s);
  const double k32 = std::pow(2.0 * b, 1.5);
  const double b32 = b * sb;
  const double boundary =
      (0.5 + alpha) * (2.0 * s * s - 1.0) / (3.0 * kSqrt2) * sb + (1.0 + 6.0 * alpha + 6.0 * alpha * alpha) / (12.0 * s2b);
  out.C4 = I(k32, [&](double t) { return (3.0 * t * t - 2.0 * s * t) * Fm(t); }, 0.0, T) +
           I(k32, [&](double t) { return (3.0 * t * t + 2.0 * s * t) * Fp(t); }, 0.0, -s) +
           I(-b32 / kSqrt2,
             [&](double t) {
               const double t2 = t * t;
               const double poly = 21.0 * t - 193.0 * t2 * t + 50.0 * t2 * t2 * t +
                                   6.0 * s * (1.0 - 29.0 * t2 + 10.0 * t2 * t2) - 9.0 * s * s * (3.0 * t - 2.0 * t2 * t);
               return G_func(t, sp) * (poly / 18.0);
             },
             lo, -s) +
           I(-b32 / (2.0 * kSqrt2),
             [&](double t) {
               const S g = G_func(t, sp) * q3(t);
               return g * g;
             },
             lo, -s) +
           boundary * G_func(-s, sp);
  out.quad_error = I.error;
  return out;
}

}  // namespace

template <class S>
ExpansionCoefficientsT<S> theorem_coefficients_at(double b, double alpha, std::span<const DiskClass> classes,
                                                  std::span<const S> u, const quadrature::Options& opt) {
  validate_shape(b, alpha);
  if (classes.size() != u.size()) throw ConfigError("theorem coefficients: weight count does not match disk count");
  ExpansionCoefficientsT<S> out;
  for (std::size_t i = 0; i < classes.size(); ++i) {
    DiskContributionT<S> c;
    switch (classes[i].regime) {
      case DiskRegime::Bulk:
        c = bulk_contribution<S>(b, alpha, classes[i].r_or_s, u[i], opt);
        break;
      case DiskRegime::Edge:
        c = edge_contribution<S>(b, alpha, classes[i].r_or_s, u[i], opt);
        if (std::abs(classes[i].r_or_s) > kEdgeFlagThreshold) out.edge_extreme = true;
        break;
      case DiskRegime::Outside:
        c.regime = DiskRegime::Outside;
        c.r_or_s = classes[i].r_or_s;
        c.C1 = u[i];
        break;
    }
    c.index = i;
    out.C1 += c.C1;
    out.C2 += c.C2;
    out.C3 += c.C3;
    out.C4 += c.C4;
    out.quad_error += c.quad_error;
    out.per_disk.push_back(c);
  }
  return out;
}

template ExpansionCoefficientsT<double> theorem_coefficients_at<double>(double, double, std::span<const DiskClass>,
                                                                        std::span<const double>,
                                                                        const quadrature::Options&);
template ExpansionCoefficientsT<std::complex<double>> theorem_coefficients_at<std::complex<double>>(
    double, double, std::span<const DiskClass>, std::span<const std::complex<double>>, const quadrature::Options&);

ExpansionCoefficients theorem_coefficients(double b, double alpha, const DiskSystem& disks,
                                           const quadrature::Options& opt) {
  const auto classes = disks.classify(b);
  const auto u = disks.weights();
  return theorem_coefficients_at<double>(b, alpha, classes, u, opt);
}

ExpansionCoefficients theorem_coefficients(const EnsembleParams& params, const DiskSystem& disks,
                                           const quadrature::Options& opt) {
  params.validate();
  return theorem_coefficients(params.b, params.alpha, disks, opt);
}

double evaluate(const ExpansionCoefficients& c, std::int64_t n) {
  const double nn = static_cast<double>(n);
  const double rt = std::sqrt(nn);
  return c.C1 * nn + c.C2 * rt + c.C3 + c.C4 / rt;
}

double predict_log_mgf(const EnsembleParams& params, const DiskSystem& disks, const quadrature::Options& opt) {
  disks.resolve(params);
  return evaluate(theorem_coefficients(params, disks, opt), params.n);
}

}  // namespace mlcount::asymptotics
