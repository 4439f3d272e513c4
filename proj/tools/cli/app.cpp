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
#include "app.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "CLI11.hpp"
#include "mlcount/mlcount.h"
#include "run_config.hpp"

#ifndef MLCOUNT_ORACLE_DIR
#define MLCOUNT_ORACLE_DIR "tests/data"
#endif

namespace mlcount::cli {

namespace {

struct Failure : std::runtime_error {
  int code;
  Failure(int c, const std::string& msg) : std::runtime_error(msg), code(c) {}
};

int exit_code_for(mlc_status s) {
  switch (s) {
    case MLC_ERR_NUMERIC:
    case MLC_ERR_INTERNAL:
      return kExitInternal;
    default:
      return kExitInput;
  }
}

// RAII owner of the library handles used by one run.
class Session {
 public:
  explicit Session(const RunConfig& cfg) {
    if (mlc_context_create(&ctx_) != MLC_OK) throw Failure(kExitInternal, "cannot create context");
    check(mlc_context_set_threads(ctx_, cfg.threads));
    check(mlc_context_set_quadrature(ctx_, cfg.tol.quad_abs_tol, cfg.tol.max_intervals));
    if (mlc_disks_create(&disks_) != MLC_OK) throw Failure(kExitInternal, "cannot create disk set");
    for (const auto& d : cfg.disks) {
      const auto s = d.edge ? mlc_disks_add_edge(disks_, d.value, d.u) : mlc_disks_add_fixed(disks_, d.value, d.u);
      if (s != MLC_OK) throw Failure(exit_code_for(s), std::string("invalid disk: ") + mlc_status_string(s));
    }
  }
  ~Session() {
    mlc_disks_destroy(disks_);
    mlc_context_destroy(ctx_);
  }
  Session(const Session&) = delete;
  Session& operator=(const Session&) = delete;

  void check(mlc_status s) const {
    if (s == MLC_OK) return;
    std::string msg = mlc_status_string(s);
    const std::string detail = mlc_context_last_error(ctx_);
    if (!detail.empty()) msg += ": " + detail;
    throw Failure(exit_code_for(s), msg);
  }

  mlc_context* ctx() const { return ctx_; }
  const mlc_disks* disks() const { return disks_; }

 private:
  mlc_context* ctx_ = nullptr;
  mlc_disks* disks_ = nullptr;
};

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

Json jnum(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

struct Csv {
  std::ostringstream os;
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
    os << '\n';
  }
};

mlc_ensemble ensemble(const RunConfig& c) {
  if (!c.n) throw Failure(kExitInput, "--n is required for " + c.subcommand);
  return {c.b, c.alpha, *c.n};
}

void need_disks(const RunConfig& c) {
  if (c.disks.empty()) throw Failure(kExitInput, c.subcommand + " needs at least one --disk");
}

Json params_json(const RunConfig& c) {
  Json p{{"b", c.b}, {"alpha", c.alpha}};
  if (c.n) p["n"] = *c.n;
  return p;
}

struct DiskInfo {
  int regime;
  double r_or_s;
};

std::vector<DiskInfo> classify(const Session& s, const RunConfig& c) {
  std::vector<int> regimes(c.disks.size());
  std::vector<double> vals(c.disks.size());
  s.check(mlc_disks_classify(s.ctx(), s.disks(), c.b, regimes.data(), vals.data(), c.disks.size()));
  std::vector<DiskInfo> out;
  for (std::size_t i = 0; i < c.disks.size(); ++i) out.push_back({regimes[i], vals[i]});
  return out;
}

Json disks_json(const Session& s, const RunConfig& c, bool with_radius) {
  const auto info = classify(s, c);
  std::vector<double> radii(c.disks.size());
  if (with_radius) {
    const auto ens = ensemble(c);
    s.check(mlc_disks_resolve(s.ctx(), s.disks(), &ens, radii.data(), radii.size()));
  }
  Json arr = Json::array();
  for (std::size_t i = 0; i < c.disks.size(); ++i) {
    Json d;
    d["index"] = i;
    d[c.disks[i].edge ? "s" : "r"] = c.disks[i].value;
    d["u"] = c.disks[i].u;
    d["regime"] = mlc_regime_name(info[i].regime);
    if (with_radius) d["radius"] = radii[i];
    arr.push_back(d);
  }
  return arr;
}

struct Output {
  Output(std::string t = {}, int c = kExitOk, std::string summary = {})
      : text(std::move(t)), code(c), table(std::move(summary)) {}
  std::string text;
  int code = kExitOk;
  std::string table;  // human-readable summary, written to stderr
};

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

// ---- subcommands ---------------------------------------------------------

Output cmd_mgf_exact(const RunConfig& c) {
  need_disks(c);
  Session s(c);
  const auto ens = ensemble(c);
  double v = 0.0;
  s.check(mlc_log_mgf_exact(s.ctx(), &ens, s.disks(), &v));
  if (c.format == "csv") {
    Csv csv;
    csv.row({"b", "alpha", "n", "log_mgf"});
    csv.row({num(c.b), num(c.alpha), std::to_string(*c.n), num(v)});
    return {csv.os.str()};
  }
  Json j;
  j["command"] = c.subcommand;
  j["params"] = params_json(c);
  j["disks"] = disks_json(s, c, true);
  j["log_mgf"] = v;
  return {dump(j)};
}

Output cmd_mgf_asymptotic(const RunConfig& c) {
  need_disks(c);
  Session s(c);
  const auto ens = ensemble(c);
  mlc_coefficients k{};
  s.check(mlc_theorem_coefficients(s.ctx(), c.b, c.alpha, s.disks(), &k, nullptr, 0));
  double predicted = 0.0;
  s.check(mlc_predict_log_mgf(s.ctx(), &ens, s.disks(), &predicted));
  double ex = 0.0;
  if (c.with_exact) s.check(mlc_log_mgf_exact(s.ctx(), &ens, s.disks(), &ex));
  if (c.format == "csv") {
    Csv csv;
    std::vector<std::string> head{"b", "alpha", "n", "C1", "C2", "C3", "C4", "quad_error", "predicted"};
    std::vector<std::string> row{num(c.b), num(c.alpha), std::to_string(*c.n), num(k.C1), num(k.C2),
                                 num(k.C3), num(k.C4),  num(k.quad_error),   num(predicted)};
    if (c.with_exact) {
      head.insert(head.end(), {"exact", "residual"});
      row.insert(row.end(), {num(ex), num(ex - predicted)});
    }
    csv.row(head);
    csv.row(row);
    return {csv.os.str()};
  }
  Json j;
  j["command"] = c.subcommand;
  j["params"] = params_json(c);
  j["disks"] = disks_json(s, c, true);
  j["coefficients"] = {{"C1", k.C1}, {"C2", k.C2}, {"C3", k.C3}, {"C4", k.C4}, {"quad_error", k.quad_error},
                       {"edge_extreme", k.edge_extreme != 0}};
  j["predicted"] = predicted;
  if (c.with_exact) {
    j["exact"] = ex;
    j["residual"] = ex - predicted;
  }
  return {dump(j)};
}

Output cmd_coeffs(const RunConfig& c) {
  need_disks(c);
  Session s(c);
  const auto info = classify(s, c);
  mlc_coefficients k{};
  std::vector<mlc_disk_term> terms(c.disks.size());
  s.check(mlc_theorem_coefficients(s.ctx(), c.b, c.alpha, s.disks(), &k, terms.data(), terms.size()));
  std::vector<std::pair<std::size_t, mlc_cumulant_series>> series;
  for (std::size_t i = 0; i < c.disks.size(); ++i) {
    for (int order : c.orders) {
      mlc_cumulant_series cs{};
      s.check(mlc_cumulant_coeffs(s.ctx(), info[i].regime, order, c.b, c.alpha, info[i].r_or_s, &cs));
      series.emplace_back(i, cs);
    }
  }
  if (c.format == "csv") {
    Csv csv;
    if (!c.orders.empty()) {
      csv.row({"b", "alpha", "disk", "regime", "r_or_s", "order", "leading", "c", "d", "e", "quad_error"});
      for (const auto& [i, cs] : series) {
        csv.row({num(c.b), num(c.alpha), std::to_string(i), mlc_regime_name(cs.regime), num(info[i].r_or_s),
                 std::to_string(cs.order), num(cs.leading), num(cs.c), num(cs.d), num(cs.e), num(cs.quad_error)});
      }
    } else {
      csv.row({"disk", "regime", "r_or_s", "u", "C1", "C2", "C3", "C4", "quad_error"});
      for (std::size_t i = 0; i < terms.size(); ++i) {
        const auto& t = terms[i];
        csv.row({std::to_string(i), mlc_regime_name(t.regime), num(t.r_or_s), num(c.disks[i].u), num(t.C1),
                 num(t.C2), num(t.C3), num(t.C4), num(t.quad_error)});
      }
      csv.row({"total", "", "", "", num(k.C1), num(k.C2), num(k.C3), num(k.C4), num(k.quad_error)});
    }
    return {csv.os.str()};
  }
  Json j;
  j["command"] = c.subcommand;
  j["params"] = params_json(c);
  j["disks"] = disks_json(s, c, false);
  j["C1"] = k.C1;
  j["C2"] = k.C2;
  j["C3"] = k.C3;
  j["C4"] = k.C4;
  j["quad_error"] = k.quad_error;
  j["edge_extreme"] = k.edge_extreme != 0;
  Json per = Json::array();
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const auto& t = terms[i];
    per.push_back({{"disk", i},
                   {"regime", mlc_regime_name(t.regime)},
                   {t.regime == MLC_EDGE ? "s" : "r", t.r_or_s},
                   {"u", c.disks[i].u},
                   {"C1", t.C1},
                   {"C2", t.C2},
                   {"C3", t.C3},
                   {"C4", t.C4},
                   {"quad_error", t.quad_error}});
  }
  j["per_disk_breakdown"] = per;
  if (!series.empty()) {
    Json arr = Json::array();
    for (const auto& [i, cs] : series) {
      arr.push_back({{"disk", i},
                     {"regime", mlc_regime_name(cs.regime)},
                     {"order", cs.order},
                     {"leading", cs.leading},
                     {"c", cs.c},
                     {"d", cs.d},
                     {"e", cs.e},
                     {"quad_error", cs.quad_error}});
    }
    j["cumulant_series"] = arr;
  }
  return {dump(j)};
}

Output cmd_cumulants(const RunConfig& c) {
  need_disks(c);
  Session s(c);
  const auto ens = ensemble(c);
  const auto info = classify(s, c);
  const std::size_t p = c.disks.size();
  const std::vector<int> orders = c.orders.empty() && c.joint.empty() ? std::vector<int>{1, 2} : c.orders;

  std::vector<int> flat;
  for (std::size_t i = 0; i < p; ++i) {
    for (int order : orders) {
      for (std::size_t k = 0; k < p; ++k) flat.push_back(k == i ? order : 0);
    }
  }
  for (const auto& nu : c.joint) {
    if (nu.size() != p) throw Failure(kExitInput, "--joint multi-index length must equal the number of disks");
    flat.insert(flat.end(), nu.begin(), nu.end());
  }
  const std::size_t count = flat.size() / p;
  std::vector<double> values(count);
  s.check(mlc_joint_cumulants_exact(s.ctx(), &ens, s.disks(), flat.data(), count, values.data()));

  const double nn = static_cast<double>(*c.n);
  std::vector<double> predicted;
  for (std::size_t i = 0; i < p; ++i) {
    for (int order : orders) {
      mlc_cumulant_series cs{};
      s.check(mlc_cumulant_coeffs(s.ctx(), info[i].regime, order, c.b, c.alpha, info[i].r_or_s, &cs));
      predicted.push_back(cs.leading * nn + cs.c * std::sqrt(nn) + cs.d + cs.e / std::sqrt(nn));
    }
  }

  if (c.format == "csv") {
    Csv csv;
    csv.row({"disk", "order", "value", "predicted"});
    std::size_t k = 0;
    for (std::size_t i = 0; i < p; ++i) {
      for (int order : orders) {
        csv.row({std::to_string(i), std::to_string(order), num(values[k]), num(predicted[k])});
        ++k;
      }
    }
    for (const auto& nu : c.joint) {
      std::string idx;
      for (std::size_t q = 0; q < nu.size(); ++q) idx += (q ? " " : "") + std::to_string(nu[q]);
      csv.row({"joint", idx, num(values[k]), ""});
      ++k;
    }
    return {csv.os.str()};
  }
  Json j;
  j["command"] = c.subcommand;
  j["params"] = params_json(c);
  j["disks"] = disks_json(s, c, true);
  Json arr = Json::array();
  std::size_t k = 0;
  for (std::size_t i = 0; i < p; ++i) {
    for (int order : orders) {
      arr.push_back({{"disk", i}, {"order", order}, {"value", values[k]}, {"predicted", predicted[k]}});
      ++k;
    }
  }
  j["cumulants"] = arr;
  if (!c.joint.empty()) {
    Json jj = Json::array();
    for (const auto& nu : c.joint) jj.push_back({{"order", nu}, {"value", values[k++]}});
    j["joint"] = jj;
  }
  return {dump(j)};
}

Output cmd_zn(const RunConfig& c) {
  std::vector<std::int64_t> ns = c.n_values;
  if (c.n) ns.insert(ns.begin(), *c.n);
  if (ns.empty()) throw Failure(kExitInput, "zn needs --n or --n-values");
  Session s(c);
  std::vector<mlc_zn> rows;
  for (auto n : ns) {
    const mlc_ensemble ens{c.b, c.alpha, n};
    mlc_zn z{};
    s.check(mlc_zn_expansion(s.ctx(), &ens, c.rational_cap, c.require_constant ? 1 : 0, &z));
    rows.push_back(z);
  }
  if (c.format == "csv") {
    Csv csv;
    csv.row({"n", "exact", "expansion", "residual"});
    for (const auto& z : rows) csv.row({std::to_string(z.n), num(z.exact), num(z.expansion), num(z.residual)});
    return {csv.os.str()};
  }
  Json j;
  j["command"] = c.subcommand;
  j["params"] = {{"b", c.b}, {"alpha", c.alpha}};
  j["has_constant"] = rows.front().has_constant != 0;
  if (rows.front().has_constant) {
    j["n1"] = rows.front().n1;
    j["n2"] = rows.front().n2;
    j["constant"] = rows.front().constant;
  }
  Json pts = Json::array();
  for (const auto& z : rows) {
    pts.push_back({{"n", z.n}, {"exact", z.exact}, {"expansion", z.expansion}, {"residual", z.residual}});
  }
  j["points"] = pts;
  return {dump(j)};
}

Output cmd_sample(const RunConfig& c) {
  need_disks(c);
  if (c.samples < 1) throw Failure(kExitInput, "--samples must be >= 1");
  Session s(c);
  const auto ens = ensemble(c);
  mlc_batch* raw = nullptr;
  s.check(mlc_sample_counts(s.ctx(), &ens, s.disks(), c.samples, c.seed, &raw));
  std::unique_ptr<mlc_batch, void (*)(mlc_batch*)> batch(raw, mlc_batch_destroy);
  std::size_t rows = 0, p = 0;
  mlc_batch_shape(batch.get(), &rows, &p);
  if (c.format == "csv") {
    std::vector<std::int64_t> counts(rows * p);
    s.check(mlc_batch_counts(batch.get(), counts.data(), counts.size()));
    Csv csv;
    std::vector<std::string> head{"sample"};
    for (std::size_t l = 0; l < p; ++l) head.push_back("N" + std::to_string(l));
    csv.row(head);
    for (std::size_t r = 0; r < rows; ++r) {
      std::vector<std::string> cells{std::to_string(r)};
      for (std::size_t l = 0; l < p; ++l) cells.push_back(std::to_string(counts[r * p + l]));
      csv.row(cells);
    }
    return {csv.os.str()};
  }
  Json summary = Json::array();
  for (std::size_t l = 0; l < p; ++l) {
    std::vector<mlc_kstat> ks(static_cast<std::size_t>(c.max_order));
    s.check(mlc_batch_cumulants(s.ctx(), batch.get(), l, c.max_order, ks.data()));
    Json cum = Json::array();
    Json se = Json::array();
    for (const auto& k : ks) {
      cum.push_back(k.value);
      se.push_back(k.std_error);
    }
    Json d{{"disk", l}, {"mean", ks[0].value}};
    d["var"] = ks.size() > 1 ? Json(ks[1].value) : Json(nullptr);
    d["cumulants"] = cum;
    d["se"] = se;
    summary.push_back(d);
  }
  Json j;
  j["command"] = c.subcommand;
  j["params"] = params_json(c);
  j["disks"] = disks_json(s, c, true);
  j["samples"] = c.samples;
  j["seed"] = c.seed;
  j["summary"] = summary;
  return {dump(j)};
}

Output cmd_verify_residual(const RunConfig& c) {
  need_disks(c);
  Session s(c);
  const std::size_t k = c.n_values.size();
  std::vector<mlc_residual_point> pts(k);
  mlc_residual_summary sum{};
  s.check(mlc_residual_scan(s.ctx(), c.b, c.alpha, s.disks(), c.n_values.data(), k, c.tol.rate_lo, c.tol.rate_hi,
                            pts.data(), &sum));
  if (!std::isfinite(sum.fitted_rate)) {
    throw Failure(kExitInput, "insufficient data: every residual is below 100x its noise floor; no rate to fit");
  }
  const bool pass = sum.pass != 0;
  std::optional<mlc_fit> fit;
  if (k >= 6) {
    mlc_fit f{};
    s.check(mlc_coefficient_fit(s.ctx(), c.b, c.alpha, s.disks(), c.n_values.data(), k, &f));
    fit = f;
  }
  if (c.format == "csv") {
    Csv csv;
    csv.row({"n", "exact", "predicted", "residual", "noise", "used"});
    for (const auto& p : pts) {
      csv.row({std::to_string(p.n), num(p.exact), num(p.predicted), num(p.residual), num(p.noise),
               p.used ? "1" : "0"});
    }
    return {csv.os.str(), pass ? kExitOk : kExitVerification};
  }
  Json j;
  j["experiment"] = "residual_scan";
  Json disks = Json::array();
  for (const auto& d : c.disks) disks.push_back({{d.edge ? "s" : "r", d.value}, {"u", d.u}});
  j["inputs"] = {{"b", c.b},
                 {"alpha", c.alpha},
                 {"disks", disks},
                 {"n_values", c.n_values},
                 {"quad_abs_tol", c.tol.quad_abs_tol}};
  Json arr = Json::array();
  for (const auto& p : pts) {
    arr.push_back({{"n", p.n},
                   {"exact", p.exact},
                   {"predicted", p.predicted},
                   {"residual", p.residual},
                   {"noise", p.noise},
                   {"used", p.used != 0}});
  }
  Json outputs{{"points", arr},
               {"fitted_rate", jnum(sum.fitted_rate)},
               {"fitted_K", jnum(sum.fitted_K)},
               {"quad_error", sum.quad_error},
               {"monotone", sum.monotone != 0},
               {"last_ratio", jnum(sum.last_ratio)}};
  if (fit) {
    outputs["fit"] = {{"fitted", fit->fitted}, {"theorem", fit->theorem}, {"deviation", fit->deviation},
                      {"condition", fit->condition}};
  }
  j["outputs"] = outputs;
  j["pass"] = pass;
  j["tolerances"] = {{"rate_lo", c.tol.rate_lo}, {"rate_hi", c.tol.rate_hi}};
  std::ostringstream t;
  t << std::setw(10) << "n" << std::setw(16) << "residual" << std::setw(14) << "noise" << "  used\n";
  for (const auto& p : pts) {
    t << std::setw(10) << p.n << std::setw(16) << std::setprecision(6) << p.residual << std::setw(14) << p.noise
      << "  " << (p.used ? "yes" : "no") << "\n";
  }
  t << "fitted rate " << sum.fitted_rate << " in [" << c.tol.rate_lo << ", " << c.tol.rate_hi << "]"
    << (sum.monotone ? ", monotone" : ", not monotone") << ": " << (pass ? "PASS" : "FAIL") << "\n";
  return {dump(j), pass ? kExitOk : kExitVerification, t.str()};
}

Output cmd_verify_clt(const RunConfig& c) {
  need_disks(c);
  if (!c.n) throw Failure(kExitInput, "--n is required for verify-clt");
  std::vector<double> bulk;
  std::optional<double> edge;
  for (const auto& d : c.disks) {
    if (d.edge) {
      if (edge) throw Failure(kExitInput, "at most one edge disk (s=...) is allowed");
      edge = d.value;
    } else {
      bulk.push_back(d.value);
    }
  }
  Session s(c);
  const std::size_t dim = bulk.size() + (edge ? 1 : 0);
  std::vector<double> means(dim), cov(dim * dim);
  mlc_clt_summary sum{};
  s.check(mlc_clt_experiment(s.ctx(), c.b, c.alpha, bulk.data(), bulk.size(), edge ? 1 : 0, edge.value_or(0.0), *c.n,
                             c.samples, c.seed, c.tol.clt, means.data(), cov.data(), dim, &sum));
  const bool pass = sum.pass != 0;
  if (c.format == "csv") {
    Csv csv;
    csv.row({"row", "col", "covariance"});
    for (std::size_t i = 0; i < dim; ++i) {
      for (std::size_t k = 0; k < dim; ++k) csv.row({std::to_string(i), std::to_string(k), num(cov[i * dim + k])});
    }
    return {csv.os.str(), pass ? kExitOk : kExitVerification};
  }
  Json rows = Json::array();
  for (std::size_t i = 0; i < dim; ++i) {
    rows.push_back(std::vector<double>(cov.begin() + static_cast<std::ptrdiff_t>(i * dim),
                                       cov.begin() + static_cast<std::ptrdiff_t>((i + 1) * dim)));
  }
  Json j;
  j["experiment"] = "clt";
  j["inputs"] = {{"b", c.b},         {"alpha", c.alpha},      {"bulk_radii", bulk},
                 {"s_frak", edge ? Json(*edge) : Json(nullptr)}, {"n", *c.n}, {"samples", c.samples},
                 {"seed", c.seed}};
  j["outputs"] = {{"means", means}, {"covariance", rows}, {"max_deviation", sum.max_deviation}};
  j["pass"] = pass;
  j["tolerances"] = {{"max_abs_deviation", c.tol.clt}};
  std::ostringstream t;
  t << std::setprecision(4) << std::fixed << "empirical covariance of standardized counts\n";
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t k = 0; k < dim; ++k) t << std::setw(10) << cov[i * dim + k];
    t << "\n";
  }
  t << "max |Cov - I| " << sum.max_deviation << " (tolerance " << c.tol.clt << "): " << (pass ? "PASS" : "FAIL")
    << "\n";
  return {dump(j), pass ? kExitOk : kExitVerification, t.str()};
}

Output cmd_specfun_test(const RunConfig& c) {
  const std::string path = c.oracle.empty() ? std::string(MLCOUNT_ORACLE_DIR) + "/gamma_grid.csv" : c.oracle;
  std::ifstream in(path);
  if (!in) throw Failure(kExitInput, "cannot open oracle file " + path);
  std::string line;
  std::getline(in, line);
  if (line.rfind("a,z,p", 0) != 0) throw Failure(kExitInput, "oracle file must start with header a,z,p");
  Session s(c);
  Csv csv;
  csv.row({"a", "lambda", "regime", "abs_err_vs_oracle"});
  double worst = 0.0, worst_a = 0.0, worst_l = 0.0;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto parts = parse_double_list(line);
    if (parts.size() != 3) throw Failure(kExitInput, "malformed oracle row: " + line);
    double p = 0.0;
    int regime = 0;
    s.check(mlc_reg_lower_gamma(s.ctx(), parts[0], parts[1], &p, &regime));
    const double err = std::abs(p - parts[2]);
    const double lambda = parts[1] / parts[0];
    csv.row({num(parts[0]), num(lambda), mlc_gamma_regime_name(regime), num(err)});
    if (err > worst) {
      worst = err;
      worst_a = parts[0];
      worst_l = lambda;
    }
    ++rows;
  }
  const bool pass = rows > 0 && worst <= c.tol.specfun;
  if (c.format == "csv") return {csv.os.str(), pass ? kExitOk : kExitVerification};
  Json j;
  j["experiment"] = "specfun_accuracy";
  j["inputs"] = {{"oracle", path}};
  j["outputs"] = {{"rows", rows}, {"max_abs_err", worst}, {"worst", {{"a", worst_a}, {"lambda", worst_l}}}};
  j["pass"] = pass;
  j["tolerances"] = {{"abs", c.tol.specfun}};
  return {dump(j), pass ? kExitOk : kExitVerification};
}

// ---- option wiring -------------------------------------------------------

enum Opt : unsigned {
  kShape = 1u << 0,
  kN = 1u << 1,
  kDisks = 1u << 2,
  kOrders = 1u << 3,
  kJoint = 1u << 4,
  kNValues = 1u << 5,
  kSampling = 1u << 6,
  kMaxOrder = 1u << 7,
  kZn = 1u << 8,
  kWithExact = 1u << 9,
  kOracle = 1u << 10,
  kQuad = 1u << 11,
  kRate = 1u << 12,
  kTolerance = 1u << 13,
};

struct Command {
  const char* name;
  const char* help;
  unsigned opts;
  Output (*fn)(const RunConfig&);
  const char* default_format;
  bool hidden;
};

const std::vector<Command>& commands() {
  static const std::vector<Command> table = {
      {"mgf-exact", "exact log moment generating function at finite n", kShape | kN | kDisks, cmd_mgf_exact, "json",
       false},
      {"mgf-asymptotic", "large-n prediction C1 n + C2 sqrt(n) + C3 + C4/sqrt(n)",
       kShape | kN | kDisks | kQuad | kWithExact, cmd_mgf_asymptotic, "json", false},
      {"coeffs", "expansion coefficients C1..C4 and per-order cumulant coefficients",
       kShape | kDisks | kOrders | kQuad, cmd_coeffs, "json", false},
      {"cumulants", "exact (joint) cumulants with asymptotic predictions",
       kShape | kN | kDisks | kOrders | kJoint | kQuad, cmd_cumulants, "json", false},
      {"zn", "log partition function against its large-n expansion", kShape | kN | kNValues | kZn, cmd_zn, "json",
       false},
      {"sample", "Monte Carlo disk counts", kShape | kN | kDisks | kSampling | kMaxOrder, cmd_sample, "json", false},
      {"verify-residual", "remainder scaling of the large-n expansion", kShape | kDisks | kNValues | kQuad | kRate,
       cmd_verify_residual, "json", false},
      {"verify-clt", "joint Gaussian fluctuation experiment", kShape | kN | kDisks | kSampling | kTolerance,
       cmd_verify_clt, "json", false},
      {"specfun-test", "incomplete gamma accuracy map against an oracle grid", kOracle | kTolerance,
       cmd_specfun_test, "csv", true},
  };
  return table;
}

// Raw flag values; applied over the base config only when given.
struct Flags {
  std::string config_path;
  bool dump_config = false;
  double b = 0, alpha = 0, quad_tol = 0, rate_lo = 0, rate_hi = 0, tolerance = 0;
  std::int64_t n = 0;
  int max_intervals = 0, max_order = 0, rational_cap = 0;
  std::vector<std::string> disks, joint;
  std::string orders, n_values, oracle, format, output;
  std::uint64_t samples = 0, seed = 0;
  unsigned threads = 0;
  bool require_constant = false, with_exact = false;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Failure(kExitInput, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunConfig build_config(const Command& cmd, CLI::App& sub, const Flags& f) {
  RunConfig c;
  if (!f.config_path.empty()) {
    Json j;
    try {
      j = Json::parse(read_file(f.config_path));
    } catch (const nlohmann::json::parse_error& e) {
      throw Failure(kExitInput, std::string("config is not valid JSON: ") + e.what());
    }
    c = from_json(j);
    if (!c.subcommand.empty() && c.subcommand != cmd.name) {
      throw Failure(kExitInput, "config is for '" + c.subcommand + "', not '" + cmd.name + "'");
    }
  } else {
    c.format = cmd.default_format;
  }
  c.subcommand = cmd.name;
  auto given = [&](const char* name) {
    const CLI::Option* o = sub.get_option_no_throw(name);
    return o != nullptr && o->count() > 0;
  };
  if (given("--b")) c.b = f.b;
  if (given("--alpha")) c.alpha = f.alpha;
  if (given("--n")) c.n = f.n;
  if (given("--disk")) {
    c.disks.clear();
    for (const auto& d : f.disks) c.disks.push_back(parse_disk(d));
  }
  if (given("--orders")) c.orders = parse_order_list(f.orders);
  if (given("--joint")) {
    c.joint.clear();
    for (const auto& j : f.joint) c.joint.push_back(parse_order_list(j));
  }
  if (given("--n-values")) c.n_values = parse_int_list(f.n_values);
  if (given("--samples")) c.samples = f.samples;
  if (given("--seed")) c.seed = f.seed;
  if (given("--max-order")) c.max_order = f.max_order;
  if (given("--rational-cap")) c.rational_cap = f.rational_cap;
  if (given("--require-constant")) c.require_constant = f.require_constant;
  if (given("--with-exact")) c.with_exact = f.with_exact;
  if (given("--oracle")) c.oracle = f.oracle;
  if (given("--quad-tol")) c.tol.quad_abs_tol = f.quad_tol;
  if (given("--max-intervals")) c.tol.max_intervals = f.max_intervals;
  if (given("--rate-lo")) c.tol.rate_lo = f.rate_lo;
  if (given("--rate-hi")) c.tol.rate_hi = f.rate_hi;
  if (given("--tolerance")) {
    if (std::string(cmd.name) == "specfun-test") {
      c.tol.specfun = f.tolerance;
    } else {
      c.tol.clt = f.tolerance;
    }
  }
  if (given("--format")) c.format = f.format;
  if (given("--output")) c.output = f.output;
  if (given("--threads")) {
    c.threads = f.threads;
  } else if (const char* env = std::getenv("ML_COUNTS_THREADS"); env != nullptr && f.config_path.empty()) {
    try {
      c.threads = static_cast<unsigned>(parse_int_list(env).at(0));
    } catch (const std::exception&) {
      throw Failure(kExitInput, std::string("ML_COUNTS_THREADS is not an integer: ") + env);
    }
  }
  if (c.format != "json" && c.format != "csv") throw Failure(kExitInput, "--format must be json or csv");
  return c;
}

void add_options(CLI::App& sub, unsigned opts, Flags& f) {
  sub.add_option("--config", f.config_path, "load a RunConfig JSON file; explicit flags override it");
  sub.add_flag("--dump-config", f.dump_config, "print the canonical RunConfig and exit");
  sub.add_option("--format", f.format, "json or csv");
  sub.add_option("--output", f.output, "write data to this file instead of stdout");
  sub.add_option("--threads", f.threads, "worker cap (0 = all cores; env ML_COUNTS_THREADS)");
  if (opts & kShape) {
    sub.add_option("--b", f.b, "potential exponent b > 0");
    sub.add_option("--alpha", f.alpha, "charge at the origin, alpha > -1");
  }
  if (opts & kN) sub.add_option("--n", f.n, "number of particles");
  if (opts & kDisks) sub.add_option("--disk", f.disks, "r=<radius>[,u=<w>] or s=<edge param>[,u=<w>]; repeatable");
  if (opts & kOrders) sub.add_option("--orders", f.orders, "comma-separated cumulant orders");
  if (opts & kJoint) sub.add_option("--joint", f.joint, "comma-separated multi-index; repeatable");
  if (opts & kNValues) sub.add_option("--n-values", f.n_values, "comma-separated increasing n");
  if (opts & kSampling) {
    sub.add_option("--samples", f.samples, "number of Monte Carlo samples");
    sub.add_option("--seed", f.seed, "64-bit seed");
  }
  if (opts & kMaxOrder) sub.add_option("--max-order", f.max_order, "k-statistics up to this order (<= 4)");
  if (opts & kZn) {
    sub.add_option("--rational-cap", f.rational_cap, "largest n1, n2 in b = n1/n2");
    sub.add_flag("--require-constant", f.require_constant, "fail when b is not n1/n2 within the cap");
  }
  if (opts & kWithExact) sub.add_flag("--with-exact", f.with_exact, "also evaluate the exact value");
  if (opts & kOracle) sub.add_option("--oracle", f.oracle, "oracle CSV with columns a,z,p");
  if (opts & kQuad) {
    sub.add_option("--quad-tol", f.quad_tol, "absolute tolerance per integral");
    sub.add_option("--max-intervals", f.max_intervals, "subdivision cap per integral");
  }
  if (opts & kRate) {
    sub.add_option("--rate-lo", f.rate_lo, "lower end of the accepted remainder rate");
    sub.add_option("--rate-hi", f.rate_hi, "upper end of the accepted remainder rate");
  }
  if (opts & kTolerance) sub.add_option("--tolerance", f.tolerance, "pass threshold");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Disk counting statistics of the Mittag-Leffler ensemble", "mlcount"};
  app.require_subcommand(1);
  Flags flags;
  std::map<CLI::App*, const Command*> lookup;
  for (const auto& cmd : commands()) {
    auto* sub = app.add_subcommand(cmd.name, cmd.help);
    if (cmd.hidden) sub->group("");
    add_options(*sub, cmd.opts, flags);
    lookup[sub] = &cmd;
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitInput;
  }

  CLI::App* chosen = app.get_subcommands().front();
  const Command& cmd = *lookup.at(chosen);
  try {
    const RunConfig cfg = build_config(cmd, *chosen, flags);
    Output result;
    if (flags.dump_config) {
      result.text = dump(to_json(cfg));
    } else {
      result = cmd.fn(cfg);
    }
    if (!cfg.output.empty() && !flags.dump_config) {
      std::ofstream file(cfg.output, std::ios::binary);
      if (!file) throw Failure(kExitInput, "cannot write " + cfg.output);
      file << result.text;
    } else {
      out << result.text;
    }
    err << result.table;
    if (result.code == kExitVerification) err << cmd.name << ": verification failed\n";
    return result.code;
  } catch (const Failure& e) {
    err << "error: " << e.what() << "\n";
    return e.code;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}

}  // namespace mlcount::cli
