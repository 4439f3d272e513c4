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
#include "ensemble.hpp"

#include <cmath>
#include <sstream>

#include "error.hpp"

namespace mlcount {

namespace {
constexpr double kRadiusSeparation = 1e-12;
}

void validate_shape(double b, double alpha) {
  if (!(b > 0.0) || !std::isfinite(b)) throw ConfigError("ensemble: b must be finite and > 0");
  if (!(alpha > -1.0) || !std::isfinite(alpha)) throw ConfigError("ensemble: alpha must be finite and > -1");
}

double critical_radius(double b) { return std::pow(b, -1.0 / (2.0 * b)); }

void EnsembleParams::validate() const {
  validate_shape(b, alpha);
  if (n < 1) throw ConfigError("ensemble: n must be >= 1");
}

double EnsembleParams::critical_radius() const { return mlcount::critical_radius(b); }

const char* to_string(DiskRegime regime) {
  switch (regime) {
    case DiskRegime::Bulk: return "bulk";
    case DiskRegime::Edge: return "edge";
    case DiskRegime::Outside: return "outside";
  }
  return "unknown";
}

DiskSystem::DiskSystem(std::vector<Disk> disks) : disks_(std::move(disks)) {}

std::vector<double> DiskSystem::weights() const {
  std::vector<double> u;
  u.reserve(disks_.size());
  for (const auto& d : disks_) u.push_back(d.u);
  return u;
}

DiskSystem DiskSystem::with_weights(std::span<const double> u) const {
  if (u.size() != disks_.size()) throw ConfigError("disk system: weight count does not match disk count");
  DiskSystem out = *this;
  for (std::size_t i = 0; i < u.size(); ++i) out.disks_[i].u = u[i];
  return out;
}

std::vector<DiskClass> DiskSystem::classify(double b) const {
  const double rc = critical_radius(b);
  std::vector<DiskClass> out;
  out.reserve(disks_.size());
  int edges = 0;
  for (std::size_t i = 0; i < disks_.size(); ++i) {
    const auto& d = disks_[i];
    if (!std::isfinite(d.u)) throw ConfigError("disk system: weights must be finite");
    if (const auto* e = std::get_if<EdgeRadius>(&d.radius)) {
      if (!std::isfinite(e->s)) throw ConfigError("disk system: edge parameter must be finite");
      out.push_back({DiskRegime::Edge, e->s});
      ++edges;
      continue;
    }
    const double r = std::get<FixedRadius>(d.radius).r;
    if (!(r > 0.0) || !std::isfinite(r)) throw ConfigError("disk system: radii must be finite and > 0");
    if (std::abs(r - rc) <= kRadiusSeparation * rc) {
      out.push_back({DiskRegime::Edge, 0.0});
      ++edges;
    } else {
      out.push_back({r < rc ? DiskRegime::Bulk : DiskRegime::Outside, r});
    }
  }
  if (edges > 1) throw ConfigError("disk system: at most one edge disk is allowed");
  for (std::size_t i = 1; i < out.size(); ++i) {
    if (static_cast<int>(out[i].regime) < static_cast<int>(out[i - 1].regime)) {
      throw ConfigError("disk system: disks must be ordered bulk < edge < outside");
    }
    if (out[i].regime == out[i - 1].regime && out[i].regime != DiskRegime::Edge &&
        !(out[i].r_or_s > out[i - 1].r_or_s * (1.0 + kRadiusSeparation))) {
      throw ConfigError("disk system: radii must be strictly increasing");
    }
  }
  return out;
}

std::vector<double> DiskSystem::resolve(const EnsembleParams& params) const {
  params.validate();
  const double rc = params.critical_radius();
  const double two_b = 2.0 * params.b;
  std::vector<double> radii;
  radii.reserve(disks_.size());
  int edges = 0;
  for (const auto& d : disks_) {
    if (!std::isfinite(d.u)) throw ConfigError("disk system: weights must be finite");
    if (const auto* e = std::get_if<EdgeRadius>(&d.radius)) {
      ++edges;
      const double base = 1.0 + std::sqrt(two_b) * e->s / std::sqrt(static_cast<double>(params.n));
      if (!(base > 0.0) || !std::isfinite(base)) {
        std::ostringstream msg;
        msg << "disk system: edge parameter s = " << e->s << " gives a non-positive radius at n = " << params.n;
        throw ConfigError(msg.str());
      }
      radii.push_back(rc * std::pow(base, 1.0 / two_b));
    } else {
      const double r = std::get<FixedRadius>(d.radius).r;
      if (!(r > 0.0) || !std::isfinite(r)) throw ConfigError("disk system: radii must be finite and > 0");
      radii.push_back(r);
    }
  }
  if (edges > 1) throw ConfigError("disk system: at most one edge disk is allowed");
  for (std::size_t i = 1; i < radii.size(); ++i) {
    if (!(radii[i] > radii[i - 1] * (1.0 + kRadiusSeparation))) {
      std::ostringstream msg;
      msg << "disk system: resolved radii must be strictly increasing (r_" << i << " = " << radii[i - 1]
          << ", r_" << i + 1 << " = " << radii[i] << ")";
      throw ConfigError(msg.str());
    }
  }
  return radii;
}

std::vector<double> log_annulus_weights(std::span<const double> u) {
  std::vector<double> U(u.size() + 1, 0.0);
  for (std::size_t l = u.size(); l-- > 0;) U[l] = U[l + 1] + u[l];
  return U;
}

std::vector<double> jump_weights(std::span<const double> u) {
  const auto U = log_annulus_weights(u);
  std::vector<double> w(u.size() + 1, 1.0);
  for (std::size_t l = 0; l < u.size(); ++l) w[l] = std::exp(U[l + 1]) * std::expm1(u[l]);
  return w;
}

}  // namespace mlcount
