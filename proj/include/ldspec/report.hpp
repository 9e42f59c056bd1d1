#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "errors.hpp"

namespace ldspec {

inline constexpr const char* kSchema = "ldspec/1";

/// Multiplier applied to every tolerance, read once from LDSPEC_TOL_SCALE.
inline double tolerance_scale() {
  static const double scale = [] {
    const char* env = std::getenv("LDSPEC_TOL_SCALE");
    if (!env || !*env) return 1.0;
    char* end = nullptr;
    double v = std::strtod(env, &end);
    require(end != env && *end == '\0' && v > 0 && std::isfinite(v), ErrorKind::Usage,
            "LDSPEC_TOL_SCALE must be a positive number");
    return v;
  }();
  return scale;
}

/// One executable check. `ref` names the invariant the check exercises.
struct CheckRecord {
  std::string name;
  bool pass = false;
  double measured = NAN;
  double expected = NAN;
  double tol = NAN;
  std::string ref;
  std::optional<double> wall_ms;
};

namespace detail {
inline nlohmann::json number_or_null(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }
inline double number_from(const nlohmann::json& j) { return j.is_null() ? NAN : j.get<double>(); }
}  // namespace detail

inline nlohmann::json to_json(const CheckRecord& c) {
  nlohmann::json j = {{"name", c.name},
                      {"status", c.pass ? "pass" : "fail"},
                      {"measured", detail::number_or_null(c.measured)},
                      {"expected", detail::number_or_null(c.expected)},
                      {"tol", detail::number_or_null(c.tol)},
                      {"ref", c.ref}};
  if (c.wall_ms) j["wall_ms"] = *c.wall_ms;
  return j;
}

inline CheckRecord check_from_json(const nlohmann::json& j) {
  CheckRecord c;
  c.name = j.at("name").get<std::string>();
  c.pass = j.at("status").get<std::string>() == "pass";
  c.measured = detail::number_from(j.at("measured"));
  c.expected = detail::number_from(j.at("expected"));
  c.tol = detail::number_from(j.at("tol"));
  c.ref = j.at("ref").get<std::string>();
  if (j.contains("wall_ms")) c.wall_ms = j.at("wall_ms").get<double>();
  return c;
}

/// Command output: input echo, checks ordered by name, summary, and an
/// optional command-specific result payload.
struct Report {
  std::string command;
  nlohmann::json inputs = nlohmann::json::object();
  std::vector<CheckRecord> checks;
  nlohmann::json result = nullptr;

  void add(CheckRecord c) { checks.push_back(std::move(c)); }

  std::size_t failed() const {
    return std::size_t(std::count_if(checks.begin(), checks.end(), [](const CheckRecord& c) { return !c.pass; }));
  }
  bool all_pass() const { return failed() == 0; }

  void sort_checks() {
    std::stable_sort(checks.begin(), checks.end(),
                     [](const CheckRecord& a, const CheckRecord& b) { return a.name < b.name; });
  }
};

inline nlohmann::json to_json(const Report& r) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : r.checks) checks.push_back(to_json(c));
  nlohmann::json j = {{"schema", kSchema},
                      {"command", r.command},
                      {"inputs", r.inputs},
                      {"checks", checks},
                      {"summary",
                       {{"total", r.checks.size()},
                        {"passed", r.checks.size() - r.failed()},
                        {"failed", r.failed()}}}};
  if (!r.result.is_null()) j["result"] = r.result;
  return j;
}

inline Report report_from_json(const nlohmann::json& j) {
  require(j.value("schema", "") == std::string(kSchema), ErrorKind::Input,
          "report: unsupported schema '" + j.value("schema", "") + "'");
  Report r;
  r.command = j.at("command").get<std::string>();
  r.inputs = j.at("inputs");
  for (const auto& c : j.at("checks")) r.checks.push_back(check_from_json(c));
  if (j.contains("result")) r.result = j.at("result");
  return r;
}

inline std::string serialize(const Report& r) { return to_json(r).dump(2) + "\n"; }

inline Report parse_report(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    fail(ErrorKind::Input, std::string("report: malformed JSON: ") + e.what());
  }
  return report_from_json(j);
}

namespace detail {
inline std::string csv_number(double v) {
  if (!std::isfinite(v)) return "";
  return nlohmann::json(v).dump();
}
inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}
}  // namespace detail

/// CSV with the fixed columns check,status,measured,expected,tol,ref.
inline void write_csv(std::ostream& os, const Report& r) {
  os << "check,status,measured,expected,tol,ref\n";
  for (const auto& c : r.checks)
    os << detail::csv_field(c.name) << ',' << (c.pass ? "pass" : "fail") << ',' << detail::csv_number(c.measured)
       << ',' << detail::csv_number(c.expected) << ',' << detail::csv_number(c.tol) << ','
       << detail::csv_field(c.ref) << '\n';
}

// Check constructors. Tolerances are scaled by tolerance_scale().

inline CheckRecord check_abs(std::string name, double measured, double expected, double tol, std::string ref) {
  CheckRecord c{std::move(name), false, measured, expected, tol * tolerance_scale(), std::move(ref), {}};
  c.pass = std::isfinite(measured) && std::abs(measured - expected) <= c.tol;
  return c;
}

inline CheckRecord check_rel(std::string name, double measured, double expected, double tol, std::string ref) {
  CheckRecord c{std::move(name), false, measured, expected, tol * tolerance_scale(), std::move(ref), {}};
  c.pass = std::isfinite(measured) && std::abs(measured - expected) <= c.tol * std::max(std::abs(expected), 1e-300);
  return c;
}

/// measured <= bound.
inline CheckRecord check_below(std::string name, double measured, double bound, std::string ref) {
  CheckRecord c{std::move(name), false, measured, 0.0, bound * tolerance_scale(), std::move(ref), {}};
  c.pass = std::isfinite(measured) && measured <= c.tol;
  return c;
}

/// Count of successes out of a total; passes when all succeeded.
inline CheckRecord check_count(std::string name, int ok, int total, std::string ref) {
  return {std::move(name), ok == total, double(ok), double(total), 0.0, std::move(ref), {}};
}

inline CheckRecord check_true(std::string name, bool cond, std::string ref) {
  return {std::move(name), cond, cond ? 1.0 : 0.0, 1.0, 0.0, std::move(ref), {}};
}

}  // namespace ldspec
