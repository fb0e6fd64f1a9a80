#pragma once

// Check specifications, residual accumulation and the verification report
// with its two renderings (JSON, fixed-width text).
//
// JSON layout is versioned by kSchemaVersion and documented in
// docs/report_schema.md. Objects have sorted keys, arrays of checks and
// findings are sorted by id, and every number is written as a decimal string
// with 17 significant digits, so equal inputs give equal bytes.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "cgeo/derivative.hpp"
#include "cgeo/errors.hpp"

namespace cgeo {

inline constexpr const char* kSchemaVersion = "1";
inline constexpr const char* kToolVersion = "1.0.0";

// Default tolerances by derivative order of the identity.
namespace tol {
inline constexpr double kAlgebraic = 1e-9;
inline constexpr double kFirstDerivative = 1e-7;
inline constexpr double kCurvature = 1e-6;
inline constexpr double kSpread = 1e-4;
inline constexpr double kCoefficient = 1e-4;
inline constexpr double kRicciFit = 1e-5;
inline constexpr double kEinstein = 1e-5;
inline constexpr double kSkew = 1e-10;
inline constexpr double kPathEquality = 1e-8;
inline constexpr double kRoundTrip = 1e-10;
inline constexpr double kHInvariance = 1e-8;
// every check on the flat model is capped at this value
inline constexpr double kFlat = 1e-10;
}  // namespace tol

struct CheckSpec {
  std::string id;
  std::string reference;  // the identity being checked, in words
  std::string evaluator;  // suite group that computes the residual
  double tolerance = 0.0;
  std::size_t n_points = 0;
  std::uint64_t seed = 0;
};

struct CheckResult {
  std::string id;
  std::string reference;
  std::string evaluator;
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::size_t n_samples = 0;
};

// Non-pass/fail output: fitted coefficients, alternative variants, notes.
struct Finding {
  std::string id;
  std::string note;
  std::map<std::string, double> values;
};

// Running max per check id. A NaN residual is sticky, so a check that ever
// produced NaN fails.
class Accumulator {
 public:
  struct Entry {
    double max = 0.0;
    std::size_t n = 0;
  };

  // `n` is the number of evaluations the value summarizes (pooled fits
  // count every sample).
  void add(const std::string& id, double v, std::size_t n = 1) {
    auto [it, fresh] = entries_.try_emplace(id, Entry{v, 0});
    Entry& e = it->second;
    if (!fresh && !std::isnan(e.max) && (std::isnan(v) || v > e.max)) e.max = v;
    e.n += n;
  }

  void add_all(const std::map<std::string, double>& m, const std::string& prefix = "") {
    for (const auto& [k, v] : m) add(prefix + k, v);
  }

  void merge(const Accumulator& o) {
    for (const auto& [id, oe] : o.entries_) {
      auto [it, fresh] = entries_.try_emplace(id, oe);
      if (fresh) continue;
      Entry& e = it->second;
      if (!std::isnan(e.max) && (std::isnan(oe.max) || oe.max > e.max)) e.max = oe.max;
      e.n += oe.n;
    }
  }

  const std::map<std::string, Entry>& entries() const { return entries_; }

 private:
  std::map<std::string, Entry> entries_;
};

struct VerificationReport {
  std::string model;
  std::string suite;
  std::vector<double> t;
  double lambda = 0.0;
  std::vector<double> a;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  DerivativeEngine engine;
  std::vector<CheckResult> checks;
  std::vector<Finding> findings;
  std::optional<double> wall_time_s;

  bool all_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
  }
  std::size_t failed() const {
    return static_cast<std::size_t>(
        std::count_if(checks.begin(), checks.end(), [](const CheckResult& c) { return !c.pass; }));
  }
};

inline std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string format_sci(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

inline std::string_view engine_name(const DerivativeEngine& e) {
  return e.mode == DiffMode::kAutodiff ? "autodiff" : "fd";
}

inline nlohmann::json report_to_json(const VerificationReport& r) {
  using nlohmann::json;
  auto reals = [](const std::vector<double>& v) {
    json arr = json::array();
    for (double x : v) arr.push_back(format_real(x));
    return arr;
  };
  json j;
  j["schema_version"] = kSchemaVersion;
  j["tool"] = {{"name", "verify"}, {"version", kToolVersion}};
  j["model"] = r.model;
  j["suite"] = r.suite;
  j["params"] = {{"t", reals(r.t)},
                 {"lambda", format_real(r.lambda)},
                 {"a", reals(r.a)},
                 {"samples", std::to_string(r.samples)}};
  json eng = {{"mode", engine_name(r.engine)}, {"seed", std::to_string(r.seed)}};
  if (r.engine.mode == DiffMode::kFiniteDifference) eng["fd_step"] = format_real(r.engine.fd_step);
  j["engine"] = eng;

  json checks = json::array();
  json failed = json::array();
  std::set<std::string> refs;
  std::set<std::string> evaluators;
  for (const auto& c : r.checks) {
    checks.push_back({{"id", c.id},
                      {"reference", c.reference},
                      {"evaluator", c.evaluator},
                      {"max_residual", format_real(c.max_residual)},
                      {"tolerance", format_real(c.tolerance)},
                      {"pass", c.pass},
                      {"n_samples", std::to_string(c.n_samples)}});
    if (!c.pass) failed.push_back(c.id);
    refs.insert(c.reference);
    evaluators.insert(c.evaluator);
  }
  j["checks"] = checks;
  j["summary"] = {{"total", std::to_string(r.checks.size())},
                  {"passed", std::to_string(r.checks.size() - r.failed())},
                  {"failed", std::to_string(r.failed())},
                  {"failed_ids", failed},
                  {"all_pass", r.all_pass()}};

  json findings = json::array();
  for (const auto& f : r.findings) {
    json vals = json::object();
    for (const auto& [k, v] : f.values) vals[k] = format_real(v);
    findings.push_back({{"id", f.id}, {"note", f.note}, {"values", vals}});
  }
  j["findings"] = findings;
  j["coverage"] = {{"references", json(std::vector<std::string>(refs.begin(), refs.end()))},
                   {"evaluators", json(std::vector<std::string>(evaluators.begin(), evaluators.end()))}};
  if (r.wall_time_s) j["wall_time_s"] = format_real(*r.wall_time_s);
  return j;
}

inline std::string render_text(const VerificationReport& r) {
  std::ostringstream os;
  auto list = [](const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + format_real(v[i]);
    return s;
  };
  os << "model: " << r.model << "  suite: " << r.suite << "  engine: " << engine_name(r.engine)
     << "  seed: " << r.seed << "  samples: " << r.samples << "\n";
  os << "t: [" << list(r.t) << "]  lambda: " << format_real(r.lambda) << "  a: [" << list(r.a) << "]\n\n";

  std::size_t w = 40;
  for (const auto& c : r.checks) w = std::max(w, c.id.size() + 2);
  char line[512];
  std::snprintf(line, sizeof line, "%-*s %-6s %12s %12s %8s\n", static_cast<int>(w), "CHECK", "STATUS",
                "RESIDUAL", "TOLERANCE", "N");
  os << line;
  for (const auto& c : r.checks) {
    std::snprintf(line, sizeof line, "%-*s %-6s %12s %12s %8zu\n", static_cast<int>(w), c.id.c_str(),
                  c.pass ? "PASS" : "FAIL", format_sci(c.max_residual).c_str(),
                  format_sci(c.tolerance).c_str(), c.n_samples);
    os << line;
  }
  os << "\n" << r.checks.size() << " checks, " << r.checks.size() - r.failed() << " passed, " << r.failed()
     << " failed\n";
  if (!r.findings.empty()) {
    os << "\nfindings:\n";
    for (const auto& f : r.findings) {
      os << "  " << f.id << ": " << f.note << "\n";
      for (const auto& [k, v] : f.values) os << "      " << k << " = " << format_real(v) << "\n";
    }
  }
  if (r.wall_time_s) os << "\nwall time: " << format_real(*r.wall_time_s) << " s\n";
  return os.str();
}

inline std::string emit_report(const VerificationReport& r, const std::string& format) {
  if (format == "json") return report_to_json(r).dump(2) + "\n";
  if (format == "text") return render_text(r);
  throw ParameterError("unknown report format '" + format + "' (json|text)");
}

}  // namespace cgeo
