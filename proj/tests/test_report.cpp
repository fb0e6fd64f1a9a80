#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <limits>

#include "cgeo/report.hpp"
#include "support.hpp"

using namespace cgeo;
using cgeo::testing::kCases;

namespace {

VerificationReport sample_report() {
  VerificationReport r;
  r.model = "flat_cosymplectic";
  r.suite = "acm";
  r.t = {0.0, 1.3};
  r.a = {1.5};
  r.samples = 10;
  r.seed = 42;
  r.checks.push_back({"a.check", "first identity", "acm", 1e-12, 1e-10, true, 10});
  r.checks.push_back({"b.check", "second identity", "acm", 0.5, 1e-10, false, 10});
  r.findings.push_back({"fit", "fitted coefficients", {{"a", 2.0}, {"b", 1.0 / 3.0}}});
  return r;
}

void keys_sorted(const nlohmann::json& j) {
  if (j.is_object()) {
    std::string prev;
    for (auto it = j.begin(); it != j.end(); ++it) {
      CHECK(prev <= it.key());
      prev = it.key();
      keys_sorted(it.value());
    }
  } else if (j.is_array()) {
    for (const auto& e : j) keys_sorted(e);
  }
}

}  // namespace

TEST_CASE("accumulator keeps the running max and counts", "[report][property]") {
  for (int n = 0; n < kCases; ++n) {
    CounterRng rng(801, n);
    Accumulator acc;
    double expect = -std::numeric_limits<double>::infinity();
    const int m = 1 + static_cast<int>(20 * rng.uniform());
    for (int i = 0; i < m; ++i) {
      const double v = rng.normal();
      expect = std::max(expect, v);
      acc.add("x", v);
    }
    CHECK(acc.entries().at("x").max == expect);
    CHECK(acc.entries().at("x").n == static_cast<std::size_t>(m));
  }
}

TEST_CASE("a NaN residual is sticky wherever it appears", "[report][property]") {
  for (int pos = 0; pos < 5; ++pos) {
    Accumulator acc;
    for (int i = 0; i < 5; ++i) acc.add("x", i == pos ? std::nan("") : 1e-3 * i);
    CHECK(std::isnan(acc.entries().at("x").max));
  }
  Accumulator a;
  Accumulator b;
  a.add("x", 1.0);
  b.add("x", std::nan(""));
  a.merge(b);
  CHECK(std::isnan(a.entries().at("x").max));
  b.merge(Accumulator{});
  b.add("x", 5.0);
  CHECK(std::isnan(b.entries().at("x").max));
}

TEST_CASE("merging split accumulators equals accumulating everything", "[report][property]") {
  for (int n = 0; n < kCases; ++n) {
    CounterRng rng(802, n);
    Accumulator whole;
    Accumulator left;
    Accumulator right;
    for (int i = 0; i < 30; ++i) {
      const std::string id = "k" + std::to_string(static_cast<int>(4 * rng.uniform()));
      const double v = rng.normal();
      whole.add(id, v);
      (rng.uniform() < 0.5 ? left : right).add(id, v);
    }
    left.merge(right);
    REQUIRE(left.entries().size() == whole.entries().size());
    for (const auto& [id, e] : whole.entries()) {
      CHECK(left.entries().at(id).max == e.max);
      CHECK(left.entries().at(id).n == e.n);
    }
  }
}

TEST_CASE("numbers are written with round-trip precision", "[report][property]") {
  for (int n = 0; n < 200; ++n) {
    CounterRng rng(803, n);
    const double v = rng.normal() * std::pow(10.0, 40.0 * rng.uniform() - 20.0);
    CHECK(std::strtod(format_real(v).c_str(), nullptr) == v);
  }
  CHECK(std::strtod(format_real(5e-324).c_str(), nullptr) == 5e-324);
  CHECK(format_real(std::nan("")) == "nan");
  CHECK(format_real(-std::numeric_limits<double>::infinity()) == "-inf");
  CHECK(format_real(0.5) == "0.5");
}

TEST_CASE("JSON report layout", "[report]") {
  const auto j = report_to_json(sample_report());
  keys_sorted(j);
  CHECK(j["schema_version"] == kSchemaVersion);
  CHECK(j["params"]["t"][1] == "1.3");
  CHECK(j["checks"][0]["max_residual"] == "9.9999999999999998e-13");
  CHECK(j["checks"][1]["pass"] == false);
  CHECK(j["summary"]["failed_ids"] == nlohmann::json::array({"b.check"}));
  CHECK(j["summary"]["all_pass"] == false);
  CHECK(j["findings"][0]["values"]["b"] == "0.33333333333333331");
  CHECK(j["coverage"]["evaluators"] == nlohmann::json::array({"acm"}));
  CHECK_FALSE(j.contains("wall_time_s"));
  CHECK_FALSE(j["engine"].contains("fd_step"));

  auto r = sample_report();
  r.engine = DerivativeEngine::finite_difference(1e-3);
  r.wall_time_s = 0.25;
  const auto k = report_to_json(r);
  CHECK(k["engine"]["fd_step"] == "0.001");
  CHECK(k["wall_time_s"] == "0.25");
}

TEST_CASE("identical reports give identical bytes", "[report]") {
  CHECK(emit_report(sample_report(), "json") == emit_report(sample_report(), "json"));
  CHECK(emit_report(sample_report(), "text") == emit_report(sample_report(), "text"));
}

TEST_CASE("text report marks failures", "[report]") {
  const auto text = render_text(sample_report());
  CHECK(text.find("b.check") != std::string::npos);
  CHECK(text.find("FAIL") != std::string::npos);
  CHECK(text.find("PASS") != std::string::npos);
  CHECK(text.find("2 checks, 1 passed, 1 failed") != std::string::npos);
  CHECK(text.find("fitted coefficients") != std::string::npos);
  CHECK_THROWS_AS(emit_report(sample_report(), "yaml"), ParameterError);
}
