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

#include <cstdint>
#include <vector>

#include "ensemble.hpp"
#include "parallel.hpp"

// Monte Carlo for disk counts. The moduli of the n points are independent and
// n |z_j|^{2b} ~ Gamma((j + alpha)/b, 1), so a configuration's disk counts
// only need n independent gamma draws; angles never matter.
namespace mlcount::sampler {

// Counter-based generator: the stream for (seed, sample, particle) is a pure
// function of those three numbers, so results do not depend on how samples
// are scheduled across threads.
class KeyedStream {
 public:
  KeyedStream(std::uint64_t seed, std::uint64_t sample, std::uint64_t particle);

  std::uint64_t next_u64();
  // Uniform on the open interval (0, 1).
  double uniform();
  double normal();

 private:
  std::uint64_t state_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

std::uint64_t mix64(std::uint64_t x);

// Marsaglia-Tsang squeeze/rejection; shapes below 1 use the boost
// Gamma(a) = Gamma(a + 1) U^{1/a}.
double gamma_variate(double shape, KeyedStream& rng);

struct SampleBatch {
  std::int64_t n = 0;
  std::size_t p = 0;
  std::size_t num_samples = 0;
  std::uint64_t seed = 0;
  std::vector<double> radii;
  std::vector<std::int64_t> counts;  // row-major num_samples x p

  std::int64_t count(std::size_t sample, std::size_t disk) const { return counts[sample * p + disk]; }
  std::vector<double> column(std::size_t disk) const;
};

SampleBatch sample_counts(const EnsembleParams& params, const DiskSystem& disks, std::size_t num_samples,
                          std::uint64_t seed, Parallelism par = {});

// n |z_j|^{2b} for every particle, row-major num_samples x n.
std::vector<double> sample_scaled_moduli(const EnsembleParams& params, std::size_t num_samples, std::uint64_t seed,
                                         Parallelism par = {});

// Unbiased k-statistics (orders 1..4) with leave-one-out jackknife standard
// errors.
struct KStatistic {
  int order = 1;
  double value = 0.0;
  double std_error = 0.0;
};

inline constexpr int kMaxKStatOrder = 4;

std::vector<KStatistic> k_statistics(const std::vector<double>& data, int max_order);

struct DiskCumulants {
  std::size_t disk = 0;
  double mean = 0.0;
  double variance = 0.0;
  std::vector<KStatistic> cumulants;
};

std::vector<DiskCumulants> mc_cumulants(const SampleBatch& batch, int max_order);

}  // namespace mlcount::sampler
