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
#include "sampler.hpp"

#include <algorithm>
#include <cmath>

#include "error.hpp"

namespace mlcount::sampler {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
}

// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x) {
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

KeyedStream::KeyedStream(std::uint64_t seed, std::uint64_t sample, std::uint64_t particle)
    : state_(mix64(mix64(mix64(seed + kGolden) ^ (sample + 0x632BE59BD9B4E019ULL)) ^ (particle + 0x8CB92BA72F3D8DD7ULL))) {}

std::uint64_t KeyedStream::next_u64() {
  state_ += kGolden;
  return mix64(state_);
}

double KeyedStream::uniform() {
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

// Marsaglia polar method.
double KeyedStream::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double x, y, s;
  do {
    x = 2.0 * uniform() - 1.0;
    y = 2.0 * uniform() - 1.0;
    s = x * x + y * y;
  } while (s >= 1.0 || s == 0.0);
  const double f = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = y * f;
  has_spare_ = true;
  return x * f;
}

double gamma_variate(double shape, KeyedStream& rng) {
  if (!(shape > 0.0) || !std::isfinite(shape)) throw DomainError("gamma shape must be finite and > 0");
  if (shape < 1.0) {
    const double g = gamma_variate(shape + 1.0, rng);
    return g * std::exp(std::log(rng.uniform()) / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = rng.normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

std::vector<double> SampleBatch::column(std::size_t disk) const {
  std::vector<double> out(num_samples);
  for (std::size_t s = 0; s < num_samples; ++s) out[s] = static_cast<double>(count(s, disk));
  return out;
}

SampleBatch sample_counts(const EnsembleParams& params, const DiskSystem& disks, std::size_t num_samples,
                          std::uint64_t seed, Parallelism par) {
  params.validate();
  if (num_samples < 1) throw ConfigError("num_samples must be >= 1");
  if (disks.empty()) throw ConfigError("at least one disk is required");
  SampleBatch batch;
  batch.n = params.n;
  batch.p = disks.size();
  batch.num_samples = num_samples;
  batch.seed = seed;
  batch.radii = disks.resolve(params);
  batch.counts.assign(num_samples * batch.p, 0);
  // Compare in gamma space: |z_j| < r  <=>  G_j < n r^{2b}.
  std::vector<double> thresholds(batch.p);
  for (std::size_t l = 0; l < batch.p; ++l) {
    thresholds[l] = static_cast<double>(params.n) * std::pow(batch.radii[l], 2.0 * params.b);
  }
  const std::size_t p = batch.p;
  parallel_for(num_samples, par, [&](std::size_t begin, std::size_t end) {
    std::vector<std::int64_t> annulus(p + 1);
    for (std::size_t s = begin; s < end; ++s) {
      std::fill(annulus.begin(), annulus.end(), 0);
      for (std::int64_t j = 1; j <= params.n; ++j) {
        KeyedStream rng(seed, s, static_cast<std::uint64_t>(j));
        const double g = gamma_variate((static_cast<double>(j) + params.alpha) / params.b, rng);
        const auto k = std::upper_bound(thresholds.begin(), thresholds.end(), g) - thresholds.begin();
        ++annulus[static_cast<std::size_t>(k)];
      }
      std::int64_t running = 0;
      for (std::size_t l = 0; l < p; ++l) {
        running += annulus[l];
        batch.counts[s * p + l] = running;
      }
    }
  });
  return batch;
}

std::vector<double> sample_scaled_moduli(const EnsembleParams& params, std::size_t num_samples, std::uint64_t seed,
                                         Parallelism par) {
  params.validate();
  const auto n = static_cast<std::size_t>(params.n);
  std::vector<double> out(num_samples * n);
  parallel_for(num_samples, par, [&](std::size_t begin, std::size_t end) {
    for (std::size_t s = begin; s < end; ++s) {
      for (std::size_t j = 1; j <= n; ++j) {
        KeyedStream rng(seed, s, j);
        out[s * n + j - 1] = gamma_variate((static_cast<double>(j) + params.alpha) / params.b, rng);
      }
    }
  });
  return out;
}

}  // namespace mlcount::sampler
