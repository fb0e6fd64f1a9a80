// verify: runs identity suites over a model and writes a report.
//
// Exit status: 0 all checks pass, 1 some check fails, 2 usage error,
// 3 internal error (the failing check id is printed).
// Every flag can also be set through an environment variable NGTS_VERIFY_<FLAG>
// (upper case, dashes as underscores); repeatable flags take comma-separated
// values there.

#include <charconv>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "cgeo/verify.hpp"

namespace {

std::pair<std::string, double> parse_tol(const std::string& s) {
  const auto eq = s.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 == s.size())
    throw cgeo::ParameterError("--tol expects <check_id>=<value>, got '" + s + "'");
  const std::string num = s.substr(eq + 1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), v);
  if (ec != std::errc() || ptr != num.data() + num.size())
    throw cgeo::ParameterError("--tol: cannot parse '" + num + "' as a number");
  return {s.substr(0, eq), v};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Verify geometric identities on seeded samples of a model"};
  std::string model;
  std::string suite = "full";
  cgeo::SuiteParams params;
  std::vector<double> ts;
  std::vector<double> as;
  std::vector<std::string> tols;
  std::string format = "json";
  std::string engine = "autodiff";
  double fd_step = 1e-4;
  std::string out;
  bool timing = false;
  bool list = false;

  auto env = [](const char* flag) { return std::string("NGTS_VERIFY_") + flag; };
  app.add_option("--model", model, "model name (flat_cosymplectic, s5_se, s5_anc)")->envname(env("MODEL"));
  app.add_option("--suite", suite, "suite name")
      ->envname(env("SUITE"))
      ->check(CLI::IsMember(cgeo::suite_names()))
      ->capture_default_str();
  app.add_option("--t", ts, "rotation angle of the circle family, repeatable (default 0, pi/4, pi/2, 1.3)")
      ->envname(env("T"))
      ->delimiter(',');
  app.add_option("--lambda", params.lambda, "lambda of the nearly cosymplectic structure")
      ->envname(env("LAMBDA"))
      ->capture_default_str();
  app.add_option("--a", as, "D-homothety constant, repeatable (default 2/3, 1, 3/2)")
      ->envname(env("A"))
      ->delimiter(',');
  app.add_option("--samples", params.samples, "number of sample points")
      ->envname(env("SAMPLES"))
      ->capture_default_str();
  app.add_option("--seed", params.seed, "sampling seed")->envname(env("SEED"))->capture_default_str();
  app.add_option("--tol", tols, "tolerance override <check_id>=<value>, repeatable")
      ->envname(env("TOL"))
      ->delimiter(',');
  app.add_option("--format", format, "report format")
      ->envname(env("FORMAT"))
      ->check(CLI::IsMember({"json", "text"}))
      ->capture_default_str();
  app.add_option("--engine", engine, "derivative engine")
      ->envname(env("ENGINE"))
      ->check(CLI::IsMember({"autodiff", "fd"}))
      ->capture_default_str();
  app.add_option("--fd-step", fd_step, "finite-difference step (engine fd)")
      ->envname(env("FD_STEP"))
      ->capture_default_str();
  app.add_option("--out", out, "write the report to this file instead of stdout")->envname(env("OUT"));
  app.add_option("--threads", params.threads, "worker threads (0: all cores); does not affect the report")
      ->envname(env("THREADS"))
      ->capture_default_str();
  app.add_flag("--timing", timing, "include wall time in the report (breaks byte-stability)")
      ->envname(env("TIMING"));
  app.add_option("--inject-fault", params.inject_fault, "make the named evaluator fail (testing)")
      ->group("");
  app.add_flag("--list", list, "list models, suites and the checks of --model/--suite, then exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (!ts.empty()) params.t = ts;
    if (!as.empty()) params.a = as;
    for (const auto& s : tols) params.tol_overrides.insert_or_assign(parse_tol(s).first, parse_tol(s).second);
    params.engine = engine == "fd" ? cgeo::DerivativeEngine::finite_difference(fd_step)
                                   : cgeo::DerivativeEngine::autodiff();

    if (list) {
      std::cout << "models:\n";
      for (const auto& m : cgeo::model_catalog()) std::cout << "  " << m.name << "  " << m.description << "\n";
      std::cout << "suites:\n";
      for (const auto& s : cgeo::suite_names()) std::cout << "  " << s << "\n";
      if (!model.empty()) {
        std::cout << "checks (" << model << ", " << suite << "):\n";
        for (const auto& c : cgeo::suite_checks(model, suite, params))
          std::printf("  %-42s %.1e  %s\n", c.id.c_str(), c.tolerance, c.reference.c_str());
      }
      return 0;
    }
    if (model.empty()) throw cgeo::ParameterError("--model is required");

    const auto report = cgeo::run_suite(model, suite, params, timing);
    const std::string bytes = cgeo::emit_report(report, format);
    if (out.empty()) {
      std::cout << bytes;
    } else {
      std::ofstream f(out, std::ios::binary);
      if (!f) throw cgeo::ParameterError("cannot open '" + out + "' for writing");
      f << bytes;
    }
    if (!report.all_pass()) {
      std::cerr << "verify: " << report.failed() << " of " << report.checks.size() << " checks failed\n";
      return 1;
    }
    return 0;
  } catch (const cgeo::ParameterError& e) {
    std::cerr << "verify: usage error: " << e.what() << "\n";
    return 2;
  } catch (const cgeo::CheckEvaluationError& e) {
    std::cerr << "verify: internal error in check '" << e.check_id() << "': " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "verify: internal error: " << e.what() << "\n";
    return 3;
  }
}
