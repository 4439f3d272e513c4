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
#include "exact.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "specfun.hpp"

namespace mlcount::exact {

double BernoulliProfile::annulus(std::size_t j, std::size_t k) const {
  if (k == 0) return p == 0 ? 1.0 : P(j, 0);
  if (k == p) return Q(j, p - 1);
  // Difference of whichever tail is smaller, so nothing cancels near 1.
  const double v = P(j, k) > 0.5 ? Q(j, k - 1) - Q(j, k) : P(j, k) - P(j, k - 1);
  return std::max(0.0, v);
}

BernoulliProfile bernoulli_profile(const EnsembleParams& params, const DiskSystem& disks, Parallelism par) {
  BernoulliProfile prof;
  prof.radii = disks.resolve(params);
  prof.n = params.n;
  prof.p = disks.size();
  const std::size_t rows = static_cast<std::size_t>(params.n);
  prof.lower.assign(rows * prof.p, 0.0);
  prof.upper.assign(rows * prof.p, 1.0);
  std::vector<double> z(prof.p);
  for (std::size_t l = 0; l < prof.p; ++l) {
    z[l] = static_cast<double>(params.n) * std::pow(prof.radii[l], 2.0 * params.b);
  }
  parallel_for(rows, par, [&](std::size_t begin, std::size_t end) {
    for (std::size_t j = begin; j < end; ++j) {
      const double a = (static_cast<double>(j + 1) + params.alpha) / params.b;
      for (std::size_t l = 0; l < prof.p; ++l) {
        const auto g = specfun::reg_gamma_pair(a, z[l]);
        prof.lower[j * prof.p + l] = g.lower;
        prof.upper[j * prof.p + l] = g.upper;
      }
      // Nested disks: enforce monotone rows against last-ulp noise.
      for (std::size_t l = 1; l < prof.p; ++l) {
        auto& lo = prof.lower[j * prof.p + l];
        auto& up = prof.upper[j * prof.p + l];
        lo = std::max(lo, prof.lower[j * prof.p + l - 1]);
        up = std::min(up, prof.upper[j * prof.p + l - 1]);
      }
    }
  });
  return prof;
}

double log_mgf_from_profile(const BernoulliProfile& prof, std::span<const double> u) {
  return log_mgf_from_profile<double>(prof, u);
}

double log_mgf_exact(const EnsembleParams& params, const DiskSystem& disks, Parallelism par) {
  const auto u = disks.weights();
  if (std::all_of(u.begin(), u.end(), [](double x) { return x == 0.0; })) {
    disks.resolve(params);
    return 0.0;
  }
  const auto prof = bernoulli_profile(params, disks, par);
  return log_mgf_from_profile(prof, std::span<const double>(u));
}

long double log_partition_exact_extended(const EnsembleParams& params) {
  params.validate();
  const long double n = static_cast<long double>(params.n);
  const long double b = params.b;
  const long double alpha = params.alpha;
  const long double logn = std::log(n);
  long double sum = 0.0L;
  long double carry = 0.0L;
  for (std::int64_t j = 1; j <= params.n; ++j) {
    const long double x = std::lgamma((static_cast<long double>(j) + alpha) / b);
    const long double t = sum + x;
    carry += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
    sum = t;
  }
  return -(n * n / (2.0L * b)) * logn - ((1.0L + 2.0L * alpha) / (2.0L * b)) * n * logn +
         n * std::log(std::numbers::pi_v<long double> / b) + (sum + carry);
}

double log_partition_exact(const EnsembleParams& params) {
  return static_cast<double>(log_partition_exact_extended(params));
}

MultiIndex marginal(std::size_t p, std::size_t l, int order) {
  MultiIndex m(p, 0);
  m.at(l) = order;
  return m;
}

namespace {

// Precomputed moment-to-cumulant recursion over all sub-multi-indices of a
// target nu. For a categorical position L with nested indicators
// X_k = 1{L <= k}, every mixed moment E[prod X_k^{m_k}] equals
// P(L <= min{k : m_k > 0}), so moments are read straight off the profile.
class CumulantPlan {
 public:
  explicit CumulantPlan(const MultiIndex& nu) : nu_(nu) {
    radix_.resize(nu.size());
    std::size_t count = 1;
    for (std::size_t k = 0; k < nu.size(); ++k) {
      radix_[k] = count;
      count *= static_cast<std::size_t>(nu[k] + 1);
    }
    count_ = count;
    first_disk_.resize(count_);
    std::vector<std::vector<int>> digits(count_);
    std::vector<int> total(count_);
    for (std::size_t idx = 0; idx < count_; ++idx) {
      digits[idx] = decode(idx);
      int t = 0;
      int first = -1;
      for (std::size_t k = 0; k < nu.size(); ++k) {
        t += digits[idx][k];
        if (first < 0 && digits[idx][k] > 0) first = static_cast<int>(k);
      }
      total[idx] = t;
      first_disk_[idx] = first;
    }
    order_.resize(count_);
    for (std::size_t i = 0; i < count_; ++i) order_[i] = i;
    std::stable_sort(order_.begin(), order_.end(), [&](std::size_t x, std::size_t y) { return total[x] < total[y]; });
    // kappa_t = mu_t - sum_{lambda <= t - e_i, lambda != t - e_i}
    //           C(t - e_i, lambda) kappa_{lambda + e_i} mu_{t - e_i - lambda}
    terms_.resize(count_);
    for (std::size_t t : order_) {
      if (total[t] == 0) continue;
      const int i = first_disk_[t];
      auto base = digits[t];
      base[i] -= 1;
      const std::size_t base_idx = encode(base);
      for (std::size_t lam = 0; lam < count_; ++lam) {
        const auto& ld = digits[lam];
        bool inside = true;
        for (std::size_t k = 0; k < nu.size() && inside; ++k) inside = ld[k] <= base[k];
        if (!inside || lam == base_idx) continue;
        double coef = 1.0;
        auto shifted = ld;
        shifted[i] += 1;
        std::vector<int> rest(nu.size());
        for (std::size_t k = 0; k < nu.size(); ++k) {
          coef *= binomial(base[k], ld[k]);
          rest[k] = base[k] - ld[k];
        }
        terms_[t].push_back({coef, encode(shifted), encode(rest)});
      }
    }
    target_ = count_ - 1;
  }

  // Cumulant of the indicator vector of one particle. P is the row of
  // lower-tail probabilities.
  double evaluate(std::span<const double> P, std::vector<double>& mu, std::vector<double>& kappa) const {
    mu.resize(count_);
    kappa.assign(count_, 0.0);
    for (std::size_t idx = 0; idx < count_; ++idx) {
      mu[idx] = first_disk_[idx] < 0 ? 1.0 : P[static_cast<std::size_t>(first_disk_[idx])];
    }
    for (std::size_t t : order_) {
      if (first_disk_[t] < 0) continue;
      double acc = mu[t];
      for (const auto& term : terms_[t]) acc -= term.coef * kappa[term.kappa] * mu[term.mu];
      kappa[t] = acc;
    }
    return kappa[target_];
  }

 private:
  struct Term {
    double coef;
    std::size_t kappa;
    std::size_t mu;
  };

  std::vector<int> decode(std::size_t idx) const {
    std::vector<int> d(nu_.size());
    for (std::size_t k = 0; k < nu_.size(); ++k) {
      d[k] = static_cast<int>((idx / radix_[k]) % static_cast<std::size_t>(nu_[k] + 1));
    }
    return d;
  }
  std::size_t encode(const std::vector<int>& d) const {
    std::size_t idx = 0;
    for (std::size_t k = 0; k < nu_.size(); ++k) idx += static_cast<std::size_t>(d[k]) * radix_[k];
    return idx;
  }
  static double binomial(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
  }

  MultiIndex nu_;
  std::vector<std::size_t> radix_;
  std::size_t count_ = 0;
  std::size_t target_ = 0;
  std::vector<int> first_disk_;
  std::vector<std::size_t> order_;
  std::vector<std::vector<Term>> terms_;
};

void check_order(const MultiIndex& nu, std::size_t p) {
  if (nu.size() != p) throw ConfigError("joint cumulant: multi-index length does not match disk count");
  int total = 0;
  for (int k : nu) {
    if (k < 0) throw ConfigError("joint cumulant: negative order");
    total += k;
  }
  if (total < 1) throw ConfigError("joint cumulant: total order must be >= 1");
  if (total > kMaxCumulantOrder) {
    throw OrderError("joint cumulant: total order " + std::to_string(total) + " exceeds the maximum of " +
                     std::to_string(kMaxCumulantOrder));
  }
}

double cumulant_closed_form(const BernoulliProfile& prof, const MultiIndex& nu) {
  std::vector<std::size_t> involved;
  for (std::size_t k = 0; k < nu.size(); ++k) {
    for (int c = 0; c < nu[k]; ++c) involved.push_back(k);
  }
  detail::CompensatedSum<double> acc;
  const std::size_t rows = static_cast<std::size_t>(prof.n);
  if (involved.size() == 1) {
    for (std::size_t j = 0; j < rows; ++j) acc.add(prof.P(j, involved[0]));
  } else {
    // Cov(X_k, X_l) = P_k (1 - P_l) for nested indicators, k <= l.
    const std::size_t lo = std::min(involved[0], involved[1]);
    const std::size_t hi = std::max(involved[0], involved[1]);
    for (std::size_t j = 0; j < rows; ++j) acc.add(prof.P(j, lo) * prof.Q(j, hi));
  }
  return acc.value();
}

}  // namespace

std::vector<double> joint_cumulants_from_profile(const BernoulliProfile& prof, std::span<const MultiIndex> orders) {
  std::vector<double> out;
  out.reserve(orders.size());
  const std::size_t rows = static_cast<std::size_t>(prof.n);
  for (const auto& nu : orders) {
    check_order(nu, prof.p);
    int total = 0;
    for (int k : nu) total += k;
    if (total <= 2) {
      out.push_back(cumulant_closed_form(prof, nu));
      continue;
    }
    const CumulantPlan plan(nu);
    detail::CompensatedSum<double> acc;
    std::vector<double> mu;
    std::vector<double> kappa;
    for (std::size_t j = 0; j < rows; ++j) {
      const std::span<const double> row(prof.lower.data() + j * prof.p, prof.p);
      // A deterministic coordinate kills every cumulant of order >= 2.
      bool degenerate = false;
      for (std::size_t l = 0; l < prof.p && !degenerate; ++l) {
        degenerate = nu[l] > 0 && (prof.P(j, l) == 0.0 || prof.Q(j, l) == 0.0);
      }
      if (degenerate) continue;
      acc.add(plan.evaluate(row, mu, kappa));
    }
    out.push_back(acc.value());
  }
  return out;
}

std::vector<double> joint_cumulants_exact(const EnsembleParams& params, const DiskSystem& disks,
                                          std::span<const MultiIndex> orders, Parallelism par) {
  for (const auto& nu : orders) check_order(nu, disks.size());
  const auto prof = bernoulli_profile(params, disks, par);
  return joint_cumulants_from_profile(prof, orders);
}

MeanCovariance mean_var_from_profile(const BernoulliProfile& prof) {
  MeanCovariance mc;
  mc.p = prof.p;
  mc.means.resize(prof.p);
  mc.covariance.resize(prof.p * prof.p);
  const std::size_t rows = static_cast<std::size_t>(prof.n);
  for (std::size_t k = 0; k < prof.p; ++k) {
    detail::CompensatedSum<double> m;
    for (std::size_t j = 0; j < rows; ++j) m.add(prof.P(j, k));
    mc.means[k] = m.value();
    for (std::size_t l = k; l < prof.p; ++l) {
      detail::CompensatedSum<double> c;
      for (std::size_t j = 0; j < rows; ++j) c.add(prof.P(j, k) * prof.Q(j, l));
      mc.covariance[k * prof.p + l] = c.value();
      mc.covariance[l * prof.p + k] = c.value();
    }
  }
  return mc;
}

MeanCovariance mean_var_exact(const EnsembleParams& params, const DiskSystem& disks, Parallelism par) {
  return mean_var_from_profile(bernoulli_profile(params, disks, par));
}

}  // namespace mlcount::exact
