// Acceptance gate: one PASS/FAIL line per criterion, tolerances pinned here
// independently of the defaults in report.hpp. Exit status 1 if any fails.

#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "cgeo/verify.hpp"

using namespace cgeo;

namespace {

struct Line {
  int n;
  std::string what;
  bool pass;
  std::string detail;
};

std::vector<Line> lines;

const CheckResult* lookup(const VerificationReport& r, const std::string& id) {
  for (const auto& c : r.checks)
    if (c.id == id) return &c;
  return nullptr;
}

const Finding* finding(const VerificationReport& r, const std::string& id) {
  for (const auto& f : r.findings)
    if (f.id == id) return &f;
  return nullptr;
}

// every listed residual <= limit
void criterion(int n, const std::string& what, const VerificationReport& r,
               const std::vector<std::pair<std::string, double>>& limits) {
  bool ok = true;
  std::string detail;
  for (const auto& [id, lim] : limits) {
    const auto* c = lookup(r, id);
    const double v = c ? c->max_residual : std::nan("");
    const bool pass = c && v <= lim;
    ok = ok && pass;
    detail += (detail.empty() ? "" : "; ") + id + " = " + format_sci(v) + (pass ? " <= " : " > ") +
              format_sci(lim);
  }
  lines.push_back({n, what, ok, detail});
}

}  // namespace

int main() {
  SuiteParams p;  // t in {0, pi/4, pi/2, 1.3}, lambda = 1, a in {2/3, 1, 3/2}, 100 samples, seed 42
  const auto se = run_suite("s5_se", "full", p);
  const auto anc = run_suite("s5_anc", "full", p);
  const auto flat = run_suite("flat_cosymplectic", "full", p);

  {
    const auto reg = build_s5_sasaki_einstein(100);
    const double ric = reg.max_residuals.at("ricci_einstein");
    const double scal = reg.max_residuals.at("scalar");
    lines.push_back({1, "S5 registration: Ric = 4g, Scal = 20", ric <= 1e-5 && scal <= 1e-5,
                     "|Ric - 4g| = " + format_sci(ric) + ", |Scal - 20| = " + format_sci(scal) + " (limit 1e-5)"});
  }
  criterion(2, "Sasaki-Einstein SU(2) system on S5", se,
            {{"su2.se.deta", 1e-7}, {"su2.se.domega1", 1e-7}, {"su2.se.domega2", 1e-7}});
  criterion(3, "Sasakian curvature identity R(X, Y)xi", se, {{"curv.base.sasakian_xi", 1e-7}});
  criterion(4, "circle family is nearly cosymplectic", anc, {{"class.nc.circle", 1e-7}});
  criterion(5, "D-homothety: ANC image, round trip, h invariance", anc,
            {{"class.anc.dhom", 1e-7}, {"dhom.roundtrip", 1e-10}, {"dhom.h_invariance", 1e-8}});
  criterion(6, "ANC eta-Einstein coefficients and scalar curvature", anc,
            {{"anc.eta_einstein.a", 1e-4}, {"anc.eta_einstein.b", 1e-4}, {"anc.scalar", 1e-4}});
  criterion(7, "NGTS metricity: full, g, F and G displays", anc,
            {{"ngts.metricity.full", 1e-7},
             {"ngts.metricity.g_display", 1e-7},
             {"ngts.metricity.F_display", 1e-7},
             {"ngts.metricity.G_display", 1e-7}});
  criterion(8, "torsion skew and family form", anc,
            {{"ngts.torsion.skew", 1e-10},
             {"ngts.torsion.family_T1", 1e-7},
             {"ngts.torsion.family_T2", 1e-7},
             {"ngts.torsion.path_b", 1e-7}});
  criterion(9, "connection path equality", anc, {{"ngts.connection.path_equality", 1e-8}});
  {
    // fit must hold; the comparison against the reference coefficients is
    // reported, and a deviation must be flagged rather than hidden
    criterion(10, "NGTS Ricci decomposition", anc,
              {{"ngts.ricci.fit_residual", 1e-5}, {"ngts.ricci.spread", 1e-4}});
    auto& l = lines.back();
    const auto* f = finding(anc, "ngts.ricci.fit");
    const auto* dev = lookup(anc, "ngts.ricci.reference_deviation");
    if (!f || !dev) {
      l.pass = false;
      l.detail += "; coefficient finding missing";
    } else {
      const bool deviates = !dev->pass;
      const bool flagged = f->note.find("DEVIATES") != std::string::npos;
      l.pass = l.pass && (deviates == flagged);
      l.detail += "; fitted (c_g, c_eta, c_w) = (" + format_real(f->values.at("c_g")) + ", " +
                  format_real(f->values.at("c_eta")) + ", " + format_real(f->values.at("c_w")) +
                  ") vs reference (5/3, 16/3, 4/3): " + (deviates ? "deviation " : "agreement ") +
                  (flagged ? "flagged" : "not flagged");
    }
  }
  criterion(11, "NGTS curvature R(Z, X)xi display", anc, {{"ngts.curvature.xi_display", 1e-6}});
  criterion(12, "ANC curvature relation to the Sasaki-Einstein curvature", anc,
            {{"dhom.curvature_se", 1e-6}, {"dhom.curvature_xi", 1e-6}});
  {
    double worst = 0.0;
    for (const auto& c : flat.checks) worst = std::max(worst, c.max_residual);
    criterion(13, "flat cosymplectic degenerate suite", flat,
              {{"ngts.torsion.zero", 1e-10}, {"ngts.connection.levi_civita", 1e-10}});
    auto& l = lines.back();
    l.pass = l.pass && flat.all_pass() && worst <= 1e-10;
    l.detail += "; all " + std::to_string(flat.checks.size()) + " residuals <= " + format_sci(worst);
  }
  {
    const auto a = emit_report(run_suite("s5_anc", "full", p), "json");
    const auto b = emit_report(anc, "json");
    lines.push_back({14, "determinism: identical seeds give identical JSON", a == b,
                     std::to_string(a.size()) + " bytes, " + (a == b ? "identical" : "different")});
  }

  int failed = 0;
  for (const auto& l : lines) {
    std::printf("%s  criterion %2d  %s\n        %s\n", l.pass ? "PASS" : "FAIL", l.n, l.what.c_str(),
                l.detail.c_str());
    failed += !l.pass;
  }
  std::printf("\n%zu criteria, %zu passed, %d failed\n", lines.size(), lines.size() - failed, failed);
  return failed == 0 ? 0 : 1;
}
