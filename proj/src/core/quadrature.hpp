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

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <queue>
#include <vector>

#include "error.hpp"

namespace mlcount::quadrature {

struct Options {
  double abs_tol = 1e-12;
  double rel_tol = 0.0;
  int max_intervals = 400;
};

template <class Value>
struct Result {
  Value value{};
  double error = 0.0;
  int intervals = 0;
};

namespace detail {

// Kronrod 15-point abscissae/weights and the embedded 7-point Gauss weights
// (QUADPACK qk15).
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

inline double magnitude(double v) { return std::abs(v); }
inline double magnitude(const std::complex<double>& v) { return std::abs(v); }

template <class Value>
struct Segment {
  double a;
  double b;
  Value value;
  double error;
  bool operator<(const Segment& other) const { return error < other.error; }
};

template <class Value, class F>
Segment<Value> kronrod15(F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const Value fc = f(center);
  Value kronrod = fc * kWgk[7];
  Value gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const Value sum = f(center - dx) + f(center + dx);
    kronrod += sum * kWgk[j];
    if (j % 2 == 1) gauss += sum * kWg[j / 2];
  }
  return {a, b, kronrod * half, magnitude((kronrod - gauss) * half)};
}

}  // namespace detail

// Globally adaptive Gauss-Kronrod (7/15) integration of f over [a, b]. Reversed
// limits return the negated integral. Breakpoints split the initial interval
// at interior points where the integrand has reduced smoothness.
template <class F>
auto integrate(F&& f, double a, double b, const Options& opt = {}, std::vector<double> breakpoints = {})
    -> Result<decltype(f(a))> {
  using Value = decltype(f(a));
  if (a == b) return {};
  if (a > b) {
    auto r = integrate(f, b, a, opt, std::move(breakpoints));
    r.value = -r.value;
    return r;
  }
  std::vector<double> cuts{a};
  for (double p : breakpoints) {
    if (p > a && p < b) cuts.push_back(p);
  }
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());

  std::priority_queue<detail::Segment<Value>> work;
  Value total{};
  double error = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (cuts[i] == cuts[i + 1]) continue;
    auto seg = detail::kronrod15<Value>(f, cuts[i], cuts[i + 1]);
    total += seg.value;
    error += seg.error;
    work.push(seg);
  }
  int intervals = static_cast<int>(work.size());
  while (error > std::max(opt.abs_tol, opt.rel_tol * detail::magnitude(total)) &&
         intervals < opt.max_intervals) {
    auto worst = work.top();
    work.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    auto left = detail::kronrod15<Value>(f, worst.a, mid);
    auto right = detail::kronrod15<Value>(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    work.push(left);
    work.push(right);
    ++intervals;
  }
  // Re-sum to shed the drift of the running updates.
  Value resum{};
  double err = 0.0;
  while (!work.empty()) {
    resum += work.top().value;
    err += work.top().error;
    work.pop();
  }
  return {resum, err, intervals};
}

}  // namespace mlcount::quadrature
