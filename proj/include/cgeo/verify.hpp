#pragma once

// run_suite: model registration, check selection, evaluation and report
// assembly. Usage errors (unknown model, suite or check id, bad parameters)
// are ParameterError; failures inside an evaluator are CheckEvaluationError.

#include <chrono>
#include <map>
#include <mutex>
#include <set>
#include <string>
#include <vector>

#include "cgeo/report.hpp"
#include "cgeo/suites.hpp"

namespace cgeo {

inline std::vector<const suites::SuiteGroup*> groups_for(const std::string& suite) {
  std::vector<const suites::SuiteGroup*> out;
  for (const auto& g : suites::groups())
    if (suite == "full" || suite == g.name) out.push_back(&g);
  if (out.empty()) {
    std::string known;
    for (const auto& n : suite_names()) known += (known.empty() ? "" : ", ") + n;
    throw ParameterError("unknown suite '" + suite + "' (known: " + known + ")");
  }
  return out;
}

inline double effective_lambda(const ModelInfo& m, const SuiteParams& p) {
  return m.kind == ModelKind::kFlatCosymplectic ? 0.0 : p.lambda;
}

inline void validate(const ModelInfo& m, const SuiteParams& p) {
  if (p.samples == 0) throw ParameterError("--samples must be positive");
  if (p.t.empty()) throw ParameterError("the t grid is empty");
  if (p.a.empty()) throw ParameterError("the a grid is empty");
  for (double a : p.a)
    if (!(a > 0.0) || !std::isfinite(a)) throw ParameterError("D-homothety constants must be positive");
  for (double t : p.t)
    if (!std::isfinite(t)) throw ParameterError("t values must be finite");
  if (m.kind != ModelKind::kFlatCosymplectic && !(p.lambda > 0.0 && std::isfinite(p.lambda)))
    throw ParameterError("lambda must be positive on " + m.name);
  if (p.engine.mode == DiffMode::kFiniteDifference && !(p.engine.fd_step > 0.0))
    throw ParameterError("finite-difference step must be positive");
}

// The checks `suite` runs on `model`, with tolerances after the flat cap and
// the overrides.
inline std::vector<CheckSpec> suite_checks(const std::string& model, const std::string& suite,
                                           const SuiteParams& p) {
  const ModelInfo& m = find_model(model);
  std::vector<CheckSpec> specs;
  for (const auto* g : groups_for(suite)) {
    auto s = g->specs(m, p);
    specs.insert(specs.end(), s.begin(), s.end());
  }
  std::set<std::string> ids;
  for (auto& s : specs) {
    if (!ids.insert(s.id).second) throw InternalConsistencyError("duplicate check id '" + s.id + "'");
    if (m.kind == ModelKind::kFlatCosymplectic) s.tolerance = std::min(s.tolerance, tol::kFlat);
    s.n_points = p.samples;
    s.seed = p.seed;
  }
  for (const auto& [id, v] : p.tol_overrides) {
    if (!ids.count(id))
      throw ParameterError("--tol: check '" + id + "' is not part of suite '" + suite + "' on " + model);
    if (!(v > 0.0) || !std::isfinite(v)) throw ParameterError("--tol: tolerance for '" + id + "' must be > 0");
    for (auto& s : specs)
      if (s.id == id) s.tolerance = v;
  }
  std::sort(specs.begin(), specs.end(), [](const CheckSpec& a, const CheckSpec& b) { return a.id < b.id; });
  return specs;
}

// Registration runs once per model and parameter set within a process.
inline void ensure_registered(const ModelInfo& m, const SuiteParams& p) {
  static std::mutex mu;
  static std::set<std::string> done;
  std::string key = m.name;
  for (double t : p.t) key += "|" + format_real(t);
  const std::lock_guard<std::mutex> lock(mu);
  if (done.count(key)) return;
  (void)register_model(m.name, p.t);
  done.insert(key);
}

inline VerificationReport run_suite(const std::string& model, const std::string& suite, const SuiteParams& p,
                                    bool timing = false) {
  const auto start = std::chrono::steady_clock::now();
  const ModelInfo& m = find_model(model);
  validate(m, p);
  const auto specs = suite_checks(model, suite, p);
  ensure_registered(m, p);

  SuiteContext ctx{m, p, effective_lambda(m, p), sample_points(m, p.seed, p.samples), {}, {}};
  for (const auto* g : groups_for(suite)) {
    try {
      if (p.inject_fault == g->name) throw InternalConsistencyError("injected fault");
      g->run(ctx);
    } catch (const CheckEvaluationError&) {
      throw;
    } catch (const std::exception& e) {
      throw CheckEvaluationError(g->name, e.what());
    }
  }

  VerificationReport r;
  r.model = model;
  r.suite = suite;
  r.t = p.t;
  r.lambda = ctx.lambda;
  r.a = p.a;
  r.samples = p.samples;
  r.seed = p.seed;
  r.engine = p.engine;
  const auto& entries = ctx.acc.entries();
  for (const auto& s : specs) {
    const auto it = entries.find(s.id);
    if (it == entries.end() || it->second.n == 0)
      throw CheckEvaluationError(s.id, "evaluator '" + s.evaluator + "' produced no residual");
    const double v = it->second.max;
    r.checks.push_back({s.id, s.reference, s.evaluator, v, s.tolerance, v <= s.tolerance, it->second.n});
  }
  for (const auto& [id, e] : entries) {
    const bool declared =
        std::any_of(specs.begin(), specs.end(), [&id = id](const CheckSpec& s) { return s.id == id; });
    if (!declared) throw CheckEvaluationError(id, "residual produced for an undeclared check");
  }
  r.findings = std::move(ctx.findings);
  std::sort(r.findings.begin(), r.findings.end(), [](const Finding& a, const Finding& b) { return a.id < b.id; });
  if (timing) r.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace cgeo
