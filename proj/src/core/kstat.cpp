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
#include <string>

#include "error.hpp"
#include "sampler.hpp"

namespace mlcount::sampler {

namespace {

using L = long double;

// Fisher's k-statistics from power sums of (shifted) data. k2..k4 are shift
// invariant; k1 gets the shift added back by the caller.
std::array<L, 4> kstats_from_sums(L m, L s1, L s2, L s3, L s4) {
  std::array<L, 4> k{};
  k[0] = s1 / m;
  if (m > 1) k[1] = (m * s2 - s1 * s1) / (m * (m - 1));
  if (m > 2) k[2] = (2 * s1 * s1 * s1 - 3 * m * s1 * s2 + m * m * s3) / (m * (m - 1) * (m - 2));
  if (m > 3) {
    k[3] = (-6 * s1 * s1 * s1 * s1 + 12 * m * s1 * s1 * s2 - 3 * m * (m - 1) * s2 * s2 - 4 * m * (m + 1) * s1 * s3 +
            m * m * (m + 1) * s4) /
           (m * (m - 1) * (m - 2) * (m - 3));
  }
  return k;
}

}  // namespace

std::vector<KStatistic> k_statistics(const std::vector<double>& data, int max_order) {
  if (max_order < 1 || max_order > kMaxKStatOrder) {
    throw OrderError("k-statistics are available for orders 1.." + std::to_string(kMaxKStatOrder));
  }
  const std::size_t count = data.size();
  if (count < static_cast<std::size_t>(10 * max_order)) {
    throw InsufficientDataError("need at least " + std::to_string(10 * max_order) + " samples for order " +
                                std::to_string(max_order) + ", got " + std::to_string(count));
  }
  L shift = 0;
  for (double x : data) shift += x;
  shift = std::round(shift / static_cast<L>(count));
  L s1 = 0, s2 = 0, s3 = 0, s4 = 0;
  for (double x : data) {
    const L y = x - shift;
    const L y2 = y * y;
    s1 += y;
    s2 += y2;
    s3 += y2 * y;
    s4 += y2 * y2;
  }
  const L m = static_cast<L>(count);
  const auto full = kstats_from_sums(m, s1, s2, s3, s4);

  // Leave-one-out replicates, each O(1) from the downdated sums; deviations
  // are taken from the full-sample value to keep the spread well conditioned.
  std::array<L, 4> mean_rep{};
  std::array<L, 4> sq_rep{};
  for (double x : data) {
    const L y = x - shift;
    const L y2 = y * y;
    const auto k = kstats_from_sums(m - 1, s1 - y, s2 - y2, s3 - y2 * y, s4 - y2 * y2);
    for (int r = 0; r < max_order; ++r) {
      const L dev = k[r] - full[r];
      mean_rep[r] += dev;
      sq_rep[r] += dev * dev;
    }
  }
  std::vector<KStatistic> out;
  for (int r = 0; r < max_order; ++r) {
    const L avg = mean_rep[r] / m;
    const L spread = std::max<L>(0, sq_rep[r] / m - avg * avg);
    KStatistic ks;
    ks.order = r + 1;
    ks.value = static_cast<double>(r == 0 ? full[0] + shift : full[r]);
    ks.std_error = static_cast<double>(std::sqrt((m - 1) * spread));
    out.push_back(ks);
  }
  return out;
}

std::vector<DiskCumulants> mc_cumulants(const SampleBatch& batch, int max_order) {
  std::vector<DiskCumulants> out;
  for (std::size_t l = 0; l < batch.p; ++l) {
    DiskCumulants dc;
    dc.disk = l;
    dc.cumulants = k_statistics(batch.column(l), max_order);
    dc.mean = dc.cumulants[0].value;
    if (max_order >= 2) {
      dc.variance = dc.cumulants[1].value;
    } else {
      dc.variance = k_statistics(batch.column(l), 2)[1].value;
    }
    out.push_back(dc);
  }
  return out;
}

}  // namespace mlcount::sampler
