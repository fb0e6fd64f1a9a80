#include <catch2/catch_amalgamated.hpp>

#include "cgeo/verify.hpp"

using namespace cgeo;

namespace {

SuiteParams small(std::size_t samples = 8) {
  SuiteParams p;
  p.samples = samples;
  return p;
}

const CheckResult& find_check(const VerificationReport& r, const std::string& id) {
  for (const auto& c : r.checks)
    if (c.id == id) return c;
  FAIL("missing check " << id);
  throw std::logic_error("unreachable");
}

}  // namespace

TEST_CASE("flat model passes every suite at the flat cap", "[verify]") {
  const auto r = run_suite("flat_cosymplectic", "full", small());
  CHECK(r.all_pass());
  CHECK(r.lambda == 0.0);
  for (const auto& c : r.checks) CHECK(c.tolerance <= tol::kFlat);
}

TEST_CASE("check lists are sorted, unique and complete", "[verify]") {
  for (const auto& m : model_catalog())
    for (const auto& s : suite_names()) {
      const auto specs = suite_checks(m.name, s, small());
      REQUIRE_FALSE(specs.empty());
      for (std::size_t i = 1; i < specs.size(); ++i) CHECK(specs[i - 1].id < specs[i].id);
      for (const auto& c : specs) {
        CHECK(c.tolerance > 0.0);
        CHECK_FALSE(c.reference.empty());
      }
    }
}

TEST_CASE("a tolerance override can flip a check", "[verify]") {
  auto p = small(4);
  p.tol_overrides["acm.killing"] = 1e-30;
  p.tol_overrides["acm.compat.base"] = 1.0;
  const auto r = run_suite("s5_se", "acm", p);
  CHECK(find_check(r, "acm.compat.base").tolerance == 1.0);
  const auto& k = find_check(r, "acm.killing");
  CHECK(k.tolerance == 1e-30);
  CHECK(k.pass == (k.max_residual <= 1e-30));
}

TEST_CASE("usage errors are parameter errors", "[verify]") {
  CHECK_THROWS_AS(run_suite("s7", "full", small()), ParameterError);
  CHECK_THROWS_AS(run_suite("s5_se", "everything", small()), ParameterError);
  auto p = small();
  p.tol_overrides["no.such.check"] = 1e-3;
  CHECK_THROWS_AS(run_suite("s5_se", "acm", p), ParameterError);
  p = small();
  p.tol_overrides["acm.killing"] = -1.0;
  CHECK_THROWS_AS(run_suite("s5_se", "acm", p), ParameterError);
  CHECK_THROWS_AS(run_suite("s5_se", "acm", small(0)), ParameterError);
  p = small();
  p.lambda = 0.0;
  CHECK_THROWS_AS(run_suite("s5_anc", "acm", p), ParameterError);
  CHECK_NOTHROW(run_suite("flat_cosymplectic", "acm", p));
  p = small();
  p.a = {1.0, -2.0};
  CHECK_THROWS_AS(run_suite("s5_anc", "dhom", p), ParameterError);
  p = small();
  p.t.clear();
  CHECK_THROWS_AS(run_suite("s5_anc", "dhom", p), ParameterError);
}

TEST_CASE("evaluator failures name the failing check", "[verify]") {
  auto p = small(2);
  p.inject_fault = "dhom";
  try {
    run_suite("s5_anc", "full", p);
    FAIL("expected an evaluation error");
  } catch (const CheckEvaluationError& e) {
    CHECK(e.check_id() == "dhom");
  }
}

TEST_CASE("reports do not depend on the thread count", "[verify]") {
  auto p = small(6);
  p.threads = 1;
  const auto one = emit_report(run_suite("s5_anc", "ngts_metricity", p), "json");
  p.threads = 3;
  const auto three = emit_report(run_suite("s5_anc", "ngts_metricity", p), "json");
  CHECK(one == three);
}

TEST_CASE("seed changes the samples but not the verdicts", "[verify]") {
  auto p = small(6);
  p.seed = 1;
  const auto a = run_suite("s5_anc", "dhom", p);
  p.seed = 2;
  const auto b = run_suite("s5_anc", "dhom", p);
  CHECK(a.all_pass());
  CHECK(b.all_pass());
  CHECK(emit_report(a, "json") != emit_report(b, "json"));
}

TEST_CASE("finite-difference engine agrees on first-order checks", "[verify]") {
  auto p = small(4);
  p.engine = DerivativeEngine::finite_difference(1e-4);
  const auto r = run_suite("s5_anc", "acm", p);
  for (const auto& c : r.checks) CHECK(c.max_residual <= 1e-6);
}
