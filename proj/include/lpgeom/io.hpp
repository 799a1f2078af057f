// JSON for bodies, speed functions and suite configs; JSON and CSV reports.
#pragma once

#include "lpgeom/verify.hpp"

#include <nlohmann/json.hpp>

#include <cinttypes>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <string>

#ifndef LPGEOM_VERSION
#define LPGEOM_VERSION "0.1.0"
#endif

namespace lpgeom {

using json = nlohmann::json;

/// Malformed input, as opposed to a geometric precondition failure.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

[[noreturn]] inline void parse_fail(const std::string& what) { throw ParseError(what); }

inline const json& need(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) parse_fail(std::string("missing field '") + key + "'");
  return j.at(key);
}

inline double as_number(const json& j, const char* what) {
  if (!j.is_number()) parse_fail(std::string(what) + " must be a number");
  return j.get<double>();
}

inline int as_int(const json& j, const char* what) {
  if (!j.is_number_integer()) parse_fail(std::string(what) + " must be an integer");
  return j.get<int>();
}

inline Vec as_vec(const json& j, const char* what) {
  if (!j.is_array() || j.empty()) parse_fail(std::string(what) + " must be a non-empty array of numbers");
  Vec v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = as_number(j[i], what);
  return v;
}

inline std::vector<Vec> as_points(const json& j, const char* what) {
  if (!j.is_array() || j.empty()) parse_fail(std::string(what) + " must be a non-empty array of points");
  std::vector<Vec> pts;
  for (const auto& e : j) pts.push_back(as_vec(e, what));
  for (const auto& p : pts)
    if (p.size() != pts.front().size()) parse_fail(std::string(what) + ": points of different dimensions");
  return pts;
}

inline json vec_json(const Vec& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Bodies

inline ConvexBody body_from_json(const json& j) {
  using namespace detail;
  const auto& type_j = need(j, "type");
  if (!type_j.is_string()) parse_fail("body type must be a string");
  const auto type = type_j.get<std::string>();
  if (type == "vpoly") return ConvexBody::from_vertices(as_points(need(j, "vertices"), "vertices"));
  if (type == "hpoly") {
    const auto normals = as_points(need(j, "normals"), "normals");
    const Vec off = as_vec(need(j, "offsets"), "offsets");
    if (static_cast<std::size_t>(off.size()) != normals.size()) parse_fail("normals and offsets differ in length");
    return ConvexBody::from_halfspaces(normals, std::vector<double>(off.data(), off.data() + off.size()));
  }
  if (type == "ball") return ConvexBody::ball(as_vec(need(j, "center"), "center"), as_number(need(j, "radius"), "radius"));
  if (type == "cube") {
    const double half = j.contains("half") ? as_number(j.at("half"), "half") : 1.0;
    return cube(as_int(need(j, "n"), "n"), half);
  }
  if (type == "simplex") return simplex(as_int(need(j, "n"), "n"));
  if (type == "random_poly") {
    const bool sym = j.contains("symmetric") && j.at("symmetric").is_boolean() && j.at("symmetric").get<bool>();
    const auto& seed = need(j, "seed");
    if (!seed.is_number_unsigned() && !seed.is_number_integer()) parse_fail("seed must be an integer");
    return random_polytope(as_int(need(j, "n"), "n"), as_int(need(j, "vertices"), "vertices"), seed.get<std::uint64_t>(),
                           sym);
  }
  parse_fail("unknown body type '" + type + "'");
}

inline ConvexBody body_from_string(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("body JSON: ") + e.what());
  }
  return body_from_json(j);
}

/// Balls as {"type":"ball"}, everything else as its vertex list.
inline json body_to_json(const ConvexBody& k) {
  if (k.is_ball()) {
    const auto& b = k.as_ball();
    return {{"type", "ball"}, {"center", detail::vec_json(b.center)}, {"radius", b.radius}};
  }
  json verts = json::array();
  for (const auto& v : k.poly().vertices) verts.push_back(detail::vec_json(v));
  return {{"type", "vpoly"}, {"vertices", verts}};
}

// ---------------------------------------------------------------------------
// Speeds

inline SpeedFunction speed_from_json(const json& j) {
  using namespace detail;
  const auto& kind_j = need(j, "kind");
  if (!kind_j.is_string()) parse_fail("speed kind must be a string");
  const auto kind = kind_j.get<std::string>();
  if (kind == "steiner") return SpeedFunction::steiner();
  if (kind == "const") return SpeedFunction::constant(as_number(need(j, "value"), "value"));
  if (kind == "affine")
    return SpeedFunction::affine(as_vec(need(j, "coeffs"), "coeffs"), as_number(need(j, "offset"), "offset"));
  if (kind == "scaled_steiner")
    return SpeedFunction::scaled_steiner(as_number(need(j, "lambda"), "lambda"), as_vec(need(j, "coeffs"), "coeffs"),
                                         j.contains("offset") ? as_number(j.at("offset"), "offset") : 0.0);
  if (kind == "pl") {
    std::vector<std::pair<double, double>> pts;
    for (const auto& p : as_points(need(j, "points"), "points")) {
      if (p.size() != 2) parse_fail("pl speed points are [x', value] pairs (n = 2 only)");
      pts.emplace_back(p[0], p[1]);
    }
    return SpeedFunction::piecewise_linear(std::move(pts));
  }
  if (kind == "alpha") {
    const Vec v = as_vec(need(j, "values"), "values");
    return SpeedFunction::general_alpha(std::vector<double>(v.data(), v.data() + v.size()));
  }
  parse_fail("unknown speed kind '" + kind + "'");
}

inline SpeedFunction speed_from_string(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("speed JSON: ") + e.what());
  }
  return speed_from_json(j);
}

// ---------------------------------------------------------------------------
// p values and suite configs

inline PParam p_from_json(const json& j) {
  try {
    if (j.is_string()) return parse_p(j.get<std::string>());
    if (j.is_number()) return PParam(j.get<double>());
  } catch (const GeometryError& e) {
    throw ParseError(e.what());
  }
  detail::parse_fail("p must be a positive number or \"inf\"");
}

inline json p_to_json(PParam p) { return p.is_infinite() ? json("inf") : json(p.value()); }

inline SuiteConfig config_from_json(const json& j) {
  using namespace detail;
  if (!j.is_object()) parse_fail("config must be a JSON object");
  static const std::set<std::string> known = {"dimensions", "p_values", "instances_per_check", "master_seed", "base_tol",
                                              "mc_samples", "checks",   "resolution",          "tol"};
  for (const auto& [key, _] : j.items())
    if (!known.count(key)) parse_fail("unknown config field '" + key + "'");
  SuiteConfig c;
  if (j.contains("dimensions")) {
    if (!j.at("dimensions").is_array()) parse_fail("dimensions must be an array");
    c.dimensions.clear();
    for (const auto& d : j.at("dimensions")) c.dimensions.push_back(as_int(d, "dimensions"));
  }
  if (j.contains("p_values")) {
    if (!j.at("p_values").is_array()) parse_fail("p_values must be an array");
    c.p_values.clear();
    for (const auto& p : j.at("p_values")) c.p_values.push_back(p_from_json(p));
  }
  if (j.contains("instances_per_check")) c.instances_per_check = as_int(j.at("instances_per_check"), "instances_per_check");
  if (j.contains("master_seed")) {
    if (!j.at("master_seed").is_number_unsigned()) parse_fail("master_seed must be a non-negative integer");
    c.master_seed = j.at("master_seed").get<std::uint64_t>();
  }
  if (j.contains("base_tol")) c.base_tol = as_number(j.at("base_tol"), "base_tol");
  if (j.contains("mc_samples")) {
    if (!j.at("mc_samples").is_number_unsigned()) parse_fail("mc_samples must be a positive integer");
    c.mc_samples = j.at("mc_samples").get<std::uint64_t>();
  }
  if (j.contains("checks")) {
    if (!j.at("checks").is_array()) parse_fail("checks must be an array of check ids");
    for (const auto& id : j.at("checks")) {
      if (!id.is_string()) parse_fail("checks must be an array of check ids");
      c.checks.push_back(id.get<std::string>());
    }
  }
  if (j.contains("resolution")) c.resolution = as_int(j.at("resolution"), "resolution");
  if (j.contains("tol")) c.tol = as_number(j.at("tol"), "tol");
  return c;
}

/// Rejects configs the suite cannot run; unknown check ids included.
inline void validate_config(const SuiteConfig& c) {
  for (int d : c.dimensions)
    if (d < 1 || d > 3) throw ParseError("dimensions must lie in 1..3");
  if (c.instances_per_check < 0) throw ParseError("instances_per_check must be nonnegative");
  if (!(c.base_tol >= 0.0)) throw ParseError("base_tol must be nonnegative");
  if (!(c.tol > 0.0)) throw ParseError("tol must be positive");
  if (c.mc_samples == 0) throw ParseError("mc_samples must be positive");
  for (const auto& id : c.checks) {
    bool found = false;
    for (const auto& [known, _] : check_catalog()) found = found || known == id;
    if (!found) throw ParseError("unknown check id '" + id + "'");
  }
}

inline json config_to_json(const SuiteConfig& c) {
  json ps = json::array();
  for (const auto& p : c.p_values) ps.push_back(p_to_json(p));
  return {{"dimensions", c.dimensions}, {"p_values", ps},          {"instances_per_check", c.instances_per_check},
          {"master_seed", c.master_seed}, {"base_tol", c.base_tol}, {"mc_samples", c.mc_samples},
          {"checks", c.checks},           {"resolution", c.resolution}, {"tol", c.tol}};
}

// ---------------------------------------------------------------------------
// Reports

struct RunManifest {
  std::string command_line;
  json config;
  std::uint64_t master_seed = 0;
  std::string version = LPGEOM_VERSION;
  std::string platform;
  double wall_clock_ms = 0.0;
};

inline std::string platform_tag() {
  std::string os =
#if defined(__linux__)
      "linux";
#elif defined(__APPLE__)
      "macos";
#elif defined(_WIN32)
      "windows";
#else
      "unknown";
#endif
#if defined(__clang__)
  os += "-clang-" + std::to_string(__clang_major__);
#elif defined(__GNUC__)
  os += "-gcc-" + std::to_string(__GNUC__);
#endif
  return os;
}

inline std::string hash_hex(const std::string& s) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, stable_hash(s));
  return buf;
}

inline std::string fmt17(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace detail {

inline json num_json(double x) { return std::isfinite(x) ? json(x) : json(fmt17(x)); }

inline json estimate_json(const Estimate& e) {
  return {{"value", num_json(e.value)},
          {"error", num_json(e.error)},
          {"method", to_string(e.method)},
          {"samples_or_cells", e.samples_or_cells}};
}

}  // namespace detail

inline json record_json(const CheckRecord& r) {
  return {{"check_id", r.check_id},
          {"index", r.index},
          {"instance", r.instance},
          {"instance_hash", hash_hex(r.instance)},
          {"lhs", detail::estimate_json(r.lhs)},
          {"rhs", detail::estimate_json(r.rhs)},
          {"margin", detail::num_json(r.margin)},
          {"slack", detail::num_json(r.slack)},
          {"pass", r.pass},
          {"diagnostic", r.diagnostic},
          {"indeterminate", r.indeterminate},
          {"runtime_ms", r.runtime_ms},
          {"note", r.note}};
}

inline json report_json(const std::vector<CheckRecord>& records, const RunManifest& m) {
  json recs = json::array();
  for (const auto& r : records) recs.push_back(record_json(r));
  json summary = json::array();
  for (const auto& s : summarize(records))
    summary.push_back({{"check_id", s.check_id},
                       {"instances", s.instances},
                       {"failures", s.failures},
                       {"diagnostics", s.diagnostics},
                       {"worst_margin", detail::num_json(s.worst_margin)},
                       {"runtime_ms", s.runtime_ms}});
  json coverage = json::array();
  for (const auto& c : coverage_manifest()) coverage.push_back({{"statement", c.statement}, {"checks", c.checks}});
  return {{"manifest",
           {{"command_line", m.command_line},
            {"config", m.config},
            {"master_seed", m.master_seed},
            {"version", m.version},
            {"platform", m.platform},
            {"wall_clock_ms", m.wall_clock_ms}}},
          {"failures", count_failures(records)},
          {"summary", summary},
          {"coverage", coverage},
          {"records", recs}};
}

/// One row per record; no timings, so equal configs give equal bytes.
inline std::string report_csv(const std::vector<CheckRecord>& records) {
  std::ostringstream out;
  out << "check_id,index,instance_hash,lhs,lhs_error,rhs,rhs_error,margin,slack,pass\n";
  for (const auto& r : records) {
    const char* pass = r.diagnostic ? "diagnostic" : r.indeterminate ? "indeterminate" : r.pass ? "true" : "false";
    out << r.check_id << ',' << r.index << ',' << hash_hex(r.instance) << ',' << fmt17(r.lhs.value) << ','
        << fmt17(r.lhs.error) << ',' << fmt17(r.rhs.value) << ',' << fmt17(r.rhs.error) << ',' << fmt17(r.margin)
        << ',' << fmt17(r.slack) << ',' << pass << '\n';
  }
  return out.str();
}

}  // namespace lpgeom
