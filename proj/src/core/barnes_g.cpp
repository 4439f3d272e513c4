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
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "error.hpp"
#include "specfun.hpp"

namespace mlcount::specfun {

double log_barnes_g(double z) {
  if (!(z > 0.0) || !std::isfinite(z)) {
    throw DomainError("log_barnes_g: argument must be finite and > 0, got " + std::to_string(z));
  }
  // Integers: log G(k) = sum_{j=1}^{k-2} log j!, exact zeros at k = 1, 2, 3.
  if (z == std::floor(z) && z <= 64.0) {
    double acc = 0.0;
    for (int j = 2; j <= static_cast<int>(z) - 2; ++j) acc += log_gamma(j + 1.0);
    return acc;
  }
  // Shift up with G(x + 1) = Gamma(x) G(x), then the large-argument expansion
  //   log G(w + 1) = w^2/2 log w - 3w^2/4 + w/2 log(2 pi) - log(w)/12 + zeta'(-1)
  //                  + sum_k B_{2k+2} / (4k(k+1) w^{2k}).
  // Both pieces are ~10^3 and cancel, so they are carried in long double.
  using L = long double;
  constexpr L kShiftTo = 24.0L;
  L x = z;
  L shift_sum = 0.0L;
  while (x < kShiftTo) {
    shift_sum += std::lgamma(x);
    x += 1.0L;
  }
  static constexpr std::array<L, 7> bernoulli = {
      -1.0L / 30.0L, 1.0L / 42.0L, -1.0L / 30.0L, 5.0L / 66.0L, -691.0L / 2730.0L, 7.0L / 6.0L, -3617.0L / 510.0L};
  const L w = x - 1.0L;
  const L logw = std::log(w);
  L tail = 0.0L;
  L wpow = w * w;
  for (std::size_t k = 1; k <= bernoulli.size(); ++k) {
    tail += bernoulli[k - 1] / (4.0L * k * (k + 1.0L) * wpow);
    wpow *= w * w;
  }
  const L big = 0.5L * w * w * logw - 0.75L * w * w + 0.5L * w * std::log(2.0L * std::numbers::pi_v<L>) -
                logw / 12.0L + static_cast<L>(kZetaPrimeMinusOne) + tail;
  return static_cast<double>(big - shift_sum);
}

}  // namespace mlcount::specfun
