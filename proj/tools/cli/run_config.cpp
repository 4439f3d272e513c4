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
#include "run_config.hpp"

#include <charconv>
#include <cstdlib>
#include <set>
#include <sstream>
#include <stdexcept>

namespace mlcount::cli {

namespace {

double to_double(const std::string& s) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec == std::errc::result_out_of_range && ptr == end) {
    // Subnormal or overflowing literal: accept what strtod rounds it to.
    return std::strtod(s.c_str(), nullptr);
  }
  if (ec != std::errc() || ptr != end) throw std::invalid_argument("not a number: '" + s + "'");
  return v;
}

std::int64_t to_int(const std::string& s) {
  std::int64_t v = 0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end) throw std::invalid_argument("not an integer: '" + s + "'");
  return v;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(item);
  if (!text.empty() && text.back() == sep) parts.emplace_back();
  return parts;
}

void check_keys(const Json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw std::invalid_argument(where + " must be an object");
  for (const auto& item : j.items()) {
    if (!allowed.count(item.key())) throw std::invalid_argument("unknown key '" + item.key() + "' in " + where);
  }
}

}  // namespace

DiskSpec parse_disk(const std::string& text) {
  DiskSpec d;
  bool have_radius = false;
  bool have_u = false;
  for (const auto& part : split(text, ',')) {
    const auto eq = part.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("disk field '" + part + "' is not key=value");
    const auto key = part.substr(0, eq);
    const double value = to_double(part.substr(eq + 1));
    if (key == "r" || key == "s") {
      if (have_radius) throw std::invalid_argument("disk '" + text + "' gives more than one of r / s");
      have_radius = true;
      d.edge = key == "s";
      d.value = value;
    } else if (key == "u") {
      if (have_u) throw std::invalid_argument("disk '" + text + "' repeats u");
      have_u = true;
      d.u = value;
    } else {
      throw std::invalid_argument("unknown disk field '" + key + "' (expected r, s or u)");
    }
  }
  if (!have_radius) throw std::invalid_argument("disk '" + text + "' needs r=<radius> or s=<edge parameter>");
  return d;
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  for (const auto& p : split(text, ',')) out.push_back(to_double(p));
  return out;
}

std::vector<std::int64_t> parse_int_list(const std::string& text) {
  std::vector<std::int64_t> out;
  for (const auto& p : split(text, ',')) out.push_back(to_int(p));
  return out;
}

std::vector<int> parse_order_list(const std::string& text) {
  std::vector<int> out;
  for (auto v : parse_int_list(text)) {
    if (v < 0 || v > 1000) throw std::invalid_argument("order out of range: " + std::to_string(v));
    out.push_back(static_cast<int>(v));
  }
  return out;
}

Json to_json(const RunConfig& c) {
  Json j;
  j["subcommand"] = c.subcommand;
  j["ensemble"] = {{"b", c.b}, {"alpha", c.alpha}, {"n", c.n ? Json(*c.n) : Json(nullptr)}};
  Json disks = Json::array();
  for (const auto& d : c.disks) {
    Json e;
    e[d.edge ? "s" : "r"] = d.value;
    e["u"] = d.u;
    disks.push_back(e);
  }
  j["disks"] = disks;
  j["orders"] = c.orders;
  j["joint"] = c.joint;
  j["n_values"] = c.n_values;
  j["samples"] = c.samples;
  j["seed"] = c.seed;
  j["max_order"] = c.max_order;
  j["zn"] = {{"rational_cap", c.rational_cap}, {"require_constant", c.require_constant}};
  j["with_exact"] = c.with_exact;
  j["oracle"] = c.oracle;
  j["tolerances"] = {{"quad_abs_tol", c.tol.quad_abs_tol}, {"max_intervals", c.tol.max_intervals},
                     {"rate_lo", c.tol.rate_lo},           {"rate_hi", c.tol.rate_hi},
                     {"clt", c.tol.clt},                   {"specfun", c.tol.specfun}};
  j["output"] = {{"format", c.format}, {"path", c.output}};
  j["threads"] = c.threads;
  return j;
}

RunConfig from_json(const Json& j) {
  check_keys(j,
             {"subcommand", "ensemble", "disks", "orders", "joint", "n_values", "samples", "seed", "max_order", "zn",
              "with_exact", "oracle", "tolerances", "output", "threads"},
             "config");
  RunConfig c;
  try {
    c.subcommand = j.value("subcommand", std::string{});
    if (j.contains("ensemble")) {
      const auto& e = j.at("ensemble");
      check_keys(e, {"b", "alpha", "n"}, "ensemble");
      c.b = e.value("b", c.b);
      c.alpha = e.value("alpha", c.alpha);
      if (e.contains("n") && !e.at("n").is_null()) c.n = e.at("n").get<std::int64_t>();
    }
    for (const auto& d : j.value("disks", Json::array())) {
      check_keys(d, {"r", "s", "u"}, "disk");
      if (d.contains("r") == d.contains("s")) throw std::invalid_argument("each disk needs exactly one of r / s");
      DiskSpec spec;
      spec.edge = d.contains("s");
      spec.value = d.at(spec.edge ? "s" : "r").get<double>();
      spec.u = d.value("u", 0.0);
      c.disks.push_back(spec);
    }
    c.orders = j.value("orders", c.orders);
    c.joint = j.value("joint", c.joint);
    c.n_values = j.value("n_values", c.n_values);
    c.samples = j.value("samples", c.samples);
    c.seed = j.value("seed", c.seed);
    c.max_order = j.value("max_order", c.max_order);
    if (j.contains("zn")) {
      const auto& z = j.at("zn");
      check_keys(z, {"rational_cap", "require_constant"}, "zn");
      c.rational_cap = z.value("rational_cap", c.rational_cap);
      c.require_constant = z.value("require_constant", c.require_constant);
    }
    c.with_exact = j.value("with_exact", c.with_exact);
    c.oracle = j.value("oracle", c.oracle);
    if (j.contains("tolerances")) {
      const auto& t = j.at("tolerances");
      check_keys(t, {"quad_abs_tol", "max_intervals", "rate_lo", "rate_hi", "clt", "specfun"}, "tolerances");
      c.tol.quad_abs_tol = t.value("quad_abs_tol", c.tol.quad_abs_tol);
      c.tol.max_intervals = t.value("max_intervals", c.tol.max_intervals);
      c.tol.rate_lo = t.value("rate_lo", c.tol.rate_lo);
      c.tol.rate_hi = t.value("rate_hi", c.tol.rate_hi);
      c.tol.clt = t.value("clt", c.tol.clt);
      c.tol.specfun = t.value("specfun", c.tol.specfun);
    }
    if (j.contains("output")) {
      const auto& o = j.at("output");
      check_keys(o, {"format", "path"}, "output");
      c.format = o.value("format", c.format);
      c.output = o.value("path", c.output);
    }
    c.threads = j.value("threads", c.threads);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  return c;
}

}  // namespace mlcount::cli
