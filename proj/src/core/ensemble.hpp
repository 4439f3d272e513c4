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
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace mlcount {

// Mittag-Leffler ensemble: density proportional to
//   prod |z_k - z_j|^2 prod |z_j|^{2 alpha} exp(-n |z_j|^{2b}).
struct EnsembleParams {
  double b = 1.0;
  double alpha = 0.0;
  std::int64_t n = 1;

  void validate() const;
  // Radius of the support of the equilibrium measure, b^{-1/(2b)}.
  double critical_radius() const;
};

void validate_shape(double b, double alpha);
double critical_radius(double b);

enum class DiskRegime { Bulk, Edge, Outside };

const char* to_string(DiskRegime regime);

struct FixedRadius {
  double r;
};

// r = b^{-1/(2b)} (1 + sqrt(2b) s / sqrt(n))^{1/(2b)}
struct EdgeRadius {
  double s;
};

struct Disk {
  std::variant<FixedRadius, EdgeRadius> radius;
  double u = 0.0;

  static Disk fixed(double r, double u = 0.0) { return {FixedRadius{r}, u}; }
  static Disk edge(double s, double u = 0.0) { return {EdgeRadius{s}, u}; }
  bool is_edge_spec() const { return std::holds_alternative<EdgeRadius>(radius); }
};

// Classification that does not depend on n: Fixed radii are bulk or outside
// relative to b^{-1/(2b)}; a Fixed radius within 1e-12 (relative) of the
// critical radius is treated as Edge with s = 0.
struct DiskClass {
  DiskRegime regime;
  double r_or_s;  // r for Bulk/Outside, s for Edge
};

// Ordered disk configuration with weights u_1..u_p.
class DiskSystem {
 public:
  DiskSystem() = default;
  explicit DiskSystem(std::vector<Disk> disks);

  void add(Disk d) { disks_.push_back(d); }
  std::size_t size() const { return disks_.size(); }
  bool empty() const { return disks_.empty(); }
  const std::vector<Disk>& disks() const { return disks_; }
  const Disk& operator[](std::size_t i) const { return disks_[i]; }

  std::vector<double> weights() const;
  DiskSystem with_weights(std::span<const double> u) const;

  // n-independent classification; throws ConfigError for two edge disks or
  // an ordering that violates bulk < edge < outside.
  std::vector<DiskClass> classify(double b) const;

  // Radii at a given n. Throws ConfigError unless 0 < r_1 < ... < r_p with
  // neighbours separated by more than 1e-12 relative, and at most one edge.
  std::vector<double> resolve(const EnsembleParams& params) const;

 private:
  std::vector<Disk> disks_;
};

// omega_l = e^{u_l + ... + u_p} - e^{u_{l+1} + ... + u_p} for l <= p, omega_{p+1} = 1.
std::vector<double> jump_weights(std::span<const double> u);
// Omega_l = e^{u_l + ... + u_p}, Omega_{p+1} = 1 (returned in log form: U_l).
std::vector<double> log_annulus_weights(std::span<const double> u);

}  // namespace mlcount
