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
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "mlcount/mlcount.h"

namespace {

struct Fixture {
  mlc_context* ctx = nullptr;
  mlc_disks* disks = nullptr;
  Fixture() {
    REQUIRE(mlc_context_create(&ctx) == MLC_OK);
    REQUIRE(mlc_disks_create(&disks) == MLC_OK);
  }
  ~Fixture() {
    mlc_disks_destroy(disks);
    mlc_context_destroy(ctx);
  }
};

}  // namespace

TEST_CASE("names and version") {
  CHECK(std::strlen(mlc_version()) > 0);
  CHECK(std::string(mlc_status_string(MLC_OK)) != std::string(mlc_status_string(MLC_ERR_CONFIG)));
  CHECK(std::string(mlc_regime_name(MLC_BULK)) == "bulk");
  CHECK(std::string(mlc_regime_name(MLC_EDGE)) == "edge");
  CHECK(std::string(mlc_regime_name(MLC_OUTSIDE)) == "outside");
}

TEST_CASE_FIXTURE(Fixture, "special functions through the C surface") {
  double v = 0;
  int regime = -1;
  CHECK(mlc_erfc(ctx, 1.0, &v) == MLC_OK);
  CHECK(std::abs(v - 0.15729920705028513066) < 1e-16);
  CHECK(mlc_reg_lower_gamma(ctx, 1.0, 1.0, &v, &regime) == MLC_OK);
  CHECK(std::abs(v - (1 - std::exp(-1.0))) < 1e-15);
  CHECK(mlc_reg_lower_gamma(ctx, 5e4, 5e4, &v, nullptr) == MLC_OK);
  CHECK(mlc_reg_lower_gamma(ctx, 5e4, 5e4, &v, &regime) == MLC_OK);
  CHECK(std::string(mlc_gamma_regime_name(regime)) == "temme");
  CHECK(mlc_log_gamma(ctx, -1.0, &v) == MLC_ERR_DOMAIN);
  CHECK(std::string(mlc_context_last_error(ctx)).size() > 0);
  CHECK(mlc_temme_R(ctx, 10.0, 1.0, &v) == MLC_ERR_DOMAIN);
  CHECK(mlc_eta_of_lambda(ctx, 2.0, &v) == MLC_OK);
  CHECK(std::abs(v - 0.78339366788359310887) < 1e-15);
  CHECK(mlc_log_barnes_g(ctx, 4.0, &v) == MLC_OK);
  CHECK(std::abs(v - std::log(2.0)) < 1e-14);
  CHECK(mlc_erfc(ctx, 0.0, nullptr) == MLC_ERR_NULL);
  CHECK(mlc_erfc(nullptr, 0.0, &v) == MLC_ERR_NULL);
}

TEST_CASE_FIXTURE(Fixture, "exact engine round trip") {
  REQUIRE(mlc_disks_add_fixed(disks, 0.5, 1.0) == MLC_OK);
  const mlc_ensemble ens{1.0, 0.0, 2};
  double v = 0;
  CHECK(mlc_log_mgf_exact(ctx, &ens, disks, &v) == MLC_OK);
  CHECK(std::abs(v - 0.66056123083221817689) < 1e-14);
  CHECK(mlc_log_partition_exact(ctx, &ens, &v) == MLC_OK);

  std::vector<double> P(2);
  CHECK(mlc_bernoulli_profile(ctx, &ens, disks, P.data(), 1) == MLC_ERR_BUFFER);
  CHECK(mlc_bernoulli_profile(ctx, &ens, disks, P.data(), 2) == MLC_OK);
  const int orders[] = {1, 2, 7};
  double k[3] = {};
  CHECK(mlc_joint_cumulants_exact(ctx, &ens, disks, orders, 2, k) == MLC_OK);
  CHECK(k[0] == doctest::Approx(P[0] + P[1]).epsilon(1e-14));
  CHECK(k[1] == doctest::Approx(P[0] * (1 - P[0]) + P[1] * (1 - P[1])).epsilon(1e-13));
  CHECK(mlc_joint_cumulants_exact(ctx, &ens, disks, orders + 2, 1, k) == MLC_ERR_ORDER);

  double mean = 0, var = 0;
  CHECK(mlc_mean_var_exact(ctx, &ens, disks, &mean, &var, 1) == MLC_OK);
  CHECK(mean == doctest::Approx(k[0]).epsilon(1e-14));
  CHECK(mlc_mean_var_exact(ctx, &ens, disks, &mean, &var, 0) == MLC_ERR_BUFFER);

  const mlc_ensemble bad{1.0, -2.0, 2};
  CHECK(mlc_log_mgf_exact(ctx, &bad, disks, &v) == MLC_ERR_CONFIG);
}

TEST_CASE_FIXTURE(Fixture, "disk set editing and validation") {
  CHECK(mlc_disks_add_fixed(disks, 0.4, 0.2) == MLC_OK);
  CHECK(mlc_disks_add_edge(disks, 0.0, 0.1) == MLC_OK);
  CHECK(mlc_disks_add_fixed(disks, 1.5, -0.3) == MLC_OK);
  size_t count = 0;
  CHECK(mlc_disks_count(disks, &count) == MLC_OK);
  CHECK(count == 3);
  int regimes[3];
  double vals[3];
  CHECK(mlc_disks_classify(ctx, disks, 1.0, regimes, vals, 3) == MLC_OK);
  CHECK(regimes[0] == MLC_BULK);
  CHECK(regimes[1] == MLC_EDGE);
  CHECK(regimes[2] == MLC_OUTSIDE);
  const double u[] = {0.0, 0.0, 0.0};
  CHECK(mlc_disks_set_weights(disks, u, 2) == MLC_ERR_CONFIG);
  CHECK(mlc_disks_set_weights(disks, u, 3) == MLC_OK);
  mlc_coefficients c{};
  CHECK(mlc_theorem_coefficients(ctx, 1.0, 0.0, disks, &c, nullptr, 0) == MLC_OK);
  CHECK(c.C1 == 0.0);
  CHECK(mlc_disks_add_edge(disks, 0.5, 0.0) == MLC_OK);
  CHECK(mlc_disks_classify(ctx, disks, 1.0, regimes, vals, 3) != MLC_OK);
  CHECK(mlc_disks_add_fixed(disks, -1.0, 0.0) != MLC_OK);
}

TEST_CASE_FIXTURE(Fixture, "asymptotic predictions") {
  REQUIRE(mlc_disks_add_fixed(disks, 0.6, 1.0) == MLC_OK);
  mlc_coefficients c{};
  mlc_disk_term terms[1];
  CHECK(mlc_theorem_coefficients(ctx, 1.0, 0.0, disks, &c, terms, 0) == MLC_ERR_BUFFER);
  CHECK(mlc_theorem_coefficients(ctx, 1.0, 0.0, disks, &c, terms, 1) == MLC_OK);
  CHECK(c.C1 == doctest::Approx(0.36).epsilon(1e-15));
  CHECK(terms[0].C2 == c.C2);
  CHECK(c.quad_error < 1e-10);
  const mlc_ensemble ens{1.0, 0.0, 4000};
  double pred = 0, ex = 0;
  CHECK(mlc_predict_log_mgf(ctx, &ens, disks, &pred) == MLC_OK);
  CHECK(mlc_log_mgf_exact(ctx, &ens, disks, &ex) == MLC_OK);
  CHECK(std::abs(ex - pred) < 1e-5);

  mlc_cumulant_series s{};
  CHECK(mlc_cumulant_coeffs(ctx, MLC_BULK, 2, 1.0, 0.0, 0.6, &s) == MLC_OK);
  CHECK(std::abs(s.c - 0.6 / std::sqrt(M_PI)) < 1e-10);
  CHECK(mlc_cumulant_coeffs(ctx, MLC_BULK, 9, 1.0, 0.0, 0.6, &s) == MLC_ERR_ORDER);
  CHECK(mlc_edge_closed_form(ctx, 2, 1.0, 0.0, 0.0, &s) == MLC_OK);
  CHECK(std::abs(s.c - 0.5 / std::sqrt(M_PI)) < 1e-14);
  double f = 0;
  CHECK(mlc_F(ctx, 0.0, 3.0, &f) == MLC_OK);
  CHECK(f == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK(mlc_G(ctx, 0.0, -1.0, &f) == MLC_ERR_DOMAIN);

  CHECK(mlc_context_set_quadrature(ctx, -1.0, 10) == MLC_ERR_CONFIG);
  CHECK(mlc_context_set_quadrature(ctx, 1e-13, 800) == MLC_OK);
}

TEST_CASE_FIXTURE(Fixture, "partition function expansion") {
  mlc_zn z{};
  const mlc_ensemble ens{1.0, 0.0, 1000};
  CHECK(mlc_zn_expansion(ctx, &ens, 64, 1, &z) == MLC_OK);
  CHECK(z.has_constant == 1);
  CHECK(z.n1 == 1);
  CHECK(std::abs(z.residual) < 1e-7);
  const mlc_ensemble irr{std::sqrt(2.0), 0.0, 100};
  CHECK(mlc_zn_expansion(ctx, &irr, 64, 1, &z) == MLC_ERR_CONFIG);
  CHECK(mlc_zn_expansion(ctx, &irr, 64, 0, &z) == MLC_OK);
  CHECK(z.has_constant == 0);
}

TEST_CASE_FIXTURE(Fixture, "sampling batches") {
  REQUIRE(mlc_disks_add_fixed(disks, 0.5, 0.0) == MLC_OK);
  REQUIRE(mlc_disks_add_fixed(disks, 0.9, 0.0) == MLC_OK);
  const mlc_ensemble ens{1.0, 0.0, 100};
  mlc_batch* batch = nullptr;
  CHECK(mlc_context_set_threads(ctx, 2) == MLC_OK);
  REQUIRE(mlc_sample_counts(ctx, &ens, disks, 400, 5, &batch) == MLC_OK);
  size_t rows = 0, p = 0;
  CHECK(mlc_batch_shape(batch, &rows, &p) == MLC_OK);
  CHECK(rows == 400);
  CHECK(p == 2);
  std::vector<int64_t> counts(rows * p);
  CHECK(mlc_batch_counts(batch, counts.data(), counts.size() - 1) == MLC_ERR_BUFFER);
  CHECK(mlc_batch_counts(batch, counts.data(), counts.size()) == MLC_OK);
  for (size_t s = 0; s < rows; ++s) CHECK(counts[2 * s] <= counts[2 * s + 1]);
  double radii[2];
  CHECK(mlc_batch_radii(batch, radii, 2) == MLC_OK);
  CHECK(radii[1] == 0.9);
  mlc_kstat ks[4];
  CHECK(mlc_batch_cumulants(ctx, batch, 0, 4, ks) == MLC_OK);
  CHECK(ks[0].order == 1);
  CHECK(mlc_batch_cumulants(ctx, batch, 2, 2, ks) == MLC_ERR_CONFIG);
  CHECK(mlc_batch_cumulants(ctx, batch, 0, 5, ks) == MLC_ERR_ORDER);
  mlc_batch_destroy(batch);

  mlc_batch* tiny = nullptr;
  REQUIRE(mlc_sample_counts(ctx, &ens, disks, 20, 5, &tiny) == MLC_OK);
  CHECK(mlc_batch_cumulants(ctx, tiny, 0, 4, ks) == MLC_ERR_INSUFFICIENT);
  mlc_batch_destroy(tiny);

  std::vector<double> g(3 * 100);
  CHECK(mlc_sample_scaled_moduli(ctx, &ens, 3, 1, g.data(), g.size()) == MLC_OK);
  CHECK(mlc_sample_scaled_moduli(ctx, &ens, 3, 1, g.data(), 10) == MLC_ERR_BUFFER);
}

TEST_CASE_FIXTURE(Fixture, "verification experiments") {
  REQUIRE(mlc_disks_add_fixed(disks, 0.6, 1.0) == MLC_OK);
  const int64_t ns[] = {500, 1000, 2000, 4000};
  mlc_residual_point pts[4];
  mlc_residual_summary sum{};
  CHECK(mlc_residual_scan(ctx, 1.0, 0.0, disks, ns, 4, -1.35, -0.75, pts, &sum) == MLC_OK);
  CHECK(sum.pass == 1);
  CHECK(pts[3].n == 4000);
  CHECK(mlc_residual_scan(ctx, 1.0, 0.0, disks, ns, 3, -1.35, -0.75, pts, &sum) == MLC_ERR_INSUFFICIENT);

  const double u0[] = {0.0};
  REQUIRE(mlc_disks_set_weights(disks, u0, 1) == MLC_OK);
  CHECK(mlc_residual_scan(ctx, 1.0, 0.0, disks, ns, 4, -1.35, -0.75, pts, &sum) == MLC_OK);
  CHECK(std::isnan(sum.fitted_rate));
  CHECK(sum.pass == 0);

  const double bulk[] = {0.5};
  double means[2], cov[4];
  mlc_clt_summary cs{};
  CHECK(mlc_clt_experiment(ctx, 1.0, 0.0, bulk, 1, 1, 0.0, 500, 2000, 4, 0.05, means, cov, 1, &cs) ==
        MLC_ERR_BUFFER);
  CHECK(mlc_clt_experiment(ctx, 1.0, 0.0, bulk, 1, 1, 0.0, 500, 2000, 4, 0.05, means, cov, 2, &cs) == MLC_OK);
  CHECK(cs.dim == 2);
  CHECK(cov[1] == cov[2]);
  CHECK(mlc_clt_experiment(ctx, 1.0, 0.0, bulk, 1, 0, 0.0, 500, 10, 4, 0.05, means, cov, 2, &cs) ==
        MLC_ERR_INSUFFICIENT);
}
