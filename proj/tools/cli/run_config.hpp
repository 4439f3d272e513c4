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
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace mlcount::cli {

using Json = nlohmann::ordered_json;

struct DiskSpec {
  bool edge = false;  // value is s when true, r otherwise
  double value = 0.0;
  double u = 0.0;

  bool operator==(const DiskSpec&) const = default;
};

// "r=<float>[,u=<float>]" or "s=<float>[,u=<float>]".
DiskSpec parse_disk(const std::string& text);
std::vector<double> parse_double_list(const std::string& text);
std::vector<std::int64_t> parse_int_list(const std::string& text);
std::vector<int> parse_order_list(const std::string& text);

struct Tolerances {
  double quad_abs_tol = 1e-12;
  int max_intervals = 400;
  double rate_lo = -1.35;
  double rate_hi = -0.75;
  double clt = 0.05;
  double specfun = 1e-13;

  bool operator==(const Tolerances&) const = default;
};

// Everything that determines a run's output. Threads and the output path are
// carried along but never change the bytes produced.
struct RunConfig {
  std::string subcommand;
  double b = 1.0;
  double alpha = 0.0;
  std::optional<std::int64_t> n;
  std::vector<DiskSpec> disks;
  std::vector<int> orders;
  std::vector<std::vector<int>> joint;
  std::vector<std::int64_t> n_values;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  int max_order = 4;
  int rational_cap = 64;
  bool require_constant = false;
  bool with_exact = false;
  std::string oracle;
  Tolerances tol;
  std::string format = "json";
  std::string output;
  unsigned threads = 0;

  bool operator==(const RunConfig&) const = default;
};

Json to_json(const RunConfig& c);
// Throws std::invalid_argument on unknown keys or wrong types.
RunConfig from_json(const Json& j);

}  // namespace mlcount::cli
