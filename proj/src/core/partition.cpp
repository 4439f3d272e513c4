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
#include "exact.hpp"

namespace mlcount::asymptotics {

RationalB rational_b(double b, int cap) {
  if (cap < 1) throw ConfigError("rational cap must be >= 1");
  for (int n2 = 1; n2 <= cap; ++n2) {
    const double n1 = std::round(b * n2);
    if (n1 < 1.0 || n1 > cap) continue;
    if (std::abs(n1 / n2 - b) <= 1e-12 * std::max(1.0, b)) return {true, static_cast<int>(n1), n2};
  }
  return {};
}

double zn_constant(double b, double alpha, int n1, int n2) {
  validate_shape(b, alpha);
  const double poly = (1.0 - 3.0 * b + b * b + 6.0 * alpha - 6.0 * b * alpha + 6.0 * alpha * alpha) / (12.0 * b);
  double g = n1 * n2 * specfun::kZetaPrimeMinusOne +
             (b * (n2 - n1) + 2.0 * n1 * alpha) / (4.0 * b) * std::log(2.0 * std::numbers::pi) -
             poly * std::log(static_cast<double>(n1));
  for (int j = 1; j <= n2; ++j) {
    for (int k = 1; k <= n1; ++k) {
      g -= specfun::log_barnes_g((j + alpha / b - 1.0) / n2 + static_cast<double>(k) / n1);
    }
  }
  return g;
}

ZnExpansion zn_expansion(const EnsembleParams& params, const ZnOptions& opt) {
  params.validate();
  ZnExpansion out;
  out.n = params.n;
  const auto rb = rational_b(params.b, opt.rational_cap);
  if (rb.found) {
    out.has_constant = true;
    out.n1 = rb.n1;
    out.n2 = rb.n2;
    out.constant = zn_constant(params.b, params.alpha, rb.n1, rb.n2);
  } else if (opt.require_constant) {
    throw ConfigError("b = " + std::to_string(params.b) + " is not n1/n2 with n1, n2 <= " +
                      std::to_string(opt.rational_cap));
  }
  using L = long double;
  const L n = static_cast<L>(params.n);
  const L b = params.b;
  const L a = params.alpha;
  const L logn = std::log(n);
  const L logb = std::log(b);
  const L pi = std::numbers::pi_v<L>;
  const L poly = (1.0L - 3.0L * b + b * b + 6.0L * a - 6.0L * b * a + 6.0L * a * a) / (12.0L * b);
  out.expansion = -(3.0L + 2.0L * logb) / (4.0L * b) * n * n - 0.5L * n * logn +
                  (std::log(2.0L * pi) / 2.0L + (b - 2.0L * a - 1.0L) / (2.0L * b) * (1.0L + logb) + std::log(pi / b)) * n +
                  poly * logn + static_cast<L>(out.constant);
  out.exact = exact::log_partition_exact_extended(params);
  return out;
}

}  // namespace mlcount::asymptotics
