#pragma once

// Identity suites. Each group declares the checks it computes for a model
// (check specs) and evaluates them over the seeded sample, point by point,
// with the base quadruple expressed in the chart of the point. Pooled
// quantities (lambda estimate, least-squares fits) are finished after the
// point loop.
//
// Structures used throughout, for a base quadruple q and the suite's lambda:
//   nc(t)     = Rotated(Homothety(q, 1/lambda), t)   nearly cosymplectic
//   anc(t, a) = DHomothety(nc(t), a), a = 3/2          almost-nearly cosymplectic
// with members i = 1, 2 (phi1t, phi2t). On the flat model lambda = 0 and the
// homothety is the identity.

#include <algorithm>
#include <atomic>
#include <exception>
#include <numbers>
#include <string>
#include <thread>
#include <type_traits>
#include <vector>

#include <Eigen/Dense>

#include "cgeo/fit.hpp"
#include "cgeo/models.hpp"
#include "cgeo/ngts.hpp"
#include "cgeo/report.hpp"

namespace cgeo {

// An exception raised while evaluating a check; `check_id` names the check
// (or check prefix) being computed when it happened.
class CheckEvaluationError : public std::runtime_error {
 public:
  CheckEvaluationError(std::string check_id, const std::string& what)
      : std::runtime_error("while evaluating '" + check_id + "': " + what), check_id_(std::move(check_id)) {}
  const std::string& check_id() const { return check_id_; }

 private:
  std::string check_id_;
};

struct SuiteParams {
  std::vector<double> t{0.0, std::numbers::pi / 4, std::numbers::pi / 2, 1.3};
  double lambda = 1.0;
  std::vector<double> a{2.0 / 3.0, 1.0, 1.5};
  std::size_t samples = 100;
  std::uint64_t seed = 42;
  DerivativeEngine engine;
  std::map<std::string, double> tol_overrides;
  unsigned threads = 0;  // 0: hardware concurrency
  std::string inject_fault;  // test hook: evaluator that throws an internal error
};

struct SuiteContext {
  const ModelInfo& model;
  const SuiteParams& params;
  double lambda;  // effective: 0 on the flat model
  std::vector<ChartPoint> points;
  Accumulator acc;
  std::vector<Finding> findings;

  const DerivativeEngine& eng() const { return params.engine; }
  bool s5() const { return model.kind != ModelKind::kFlatCosymplectic; }

  // Evaluates fn(point, stage) -> R for every sample point, in parallel, and
  // returns the results in point order. `stage` is a string the callee sets
  // to the check id it is working on, for error reporting.
  template <class R, class Fn>
  std::vector<R> map_points(Fn fn) const {
    const std::size_t n = points.size();
    std::vector<R> out(n);
    std::vector<std::exception_ptr> errors(n);
    std::vector<std::string> stages(n);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          out[i] = fn(points[i], stages[i]);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    };
    unsigned nt = params.threads ? params.threads : std::max(1u, std::thread::hardware_concurrency());
    nt = static_cast<unsigned>(std::min<std::size_t>(nt, std::max<std::size_t>(n, 1)));
    std::vector<std::thread> pool;
    for (unsigned k = 1; k < nt; ++k) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    for (std::size_t i = 0; i < n; ++i)
      if (errors[i]) {
        try {
          std::rethrow_exception(errors[i]);
        } catch (const CheckEvaluationError&) {
          throw;
        } catch (const std::exception& e) {
          throw CheckEvaluationError(stages[i].empty() ? "?" : stages[i], e.what());
        }
      }
    return out;
  }
};

struct SpecList {
  std::string evaluator;
  std::vector<CheckSpec> specs;
  void add(const std::string& id, double tolerance, const std::string& reference) {
    specs.push_back({id, reference, evaluator, tolerance, 0, 0});
  }
};

namespace suites {

using Base = ModelKind;

// Calls f(q) with the base quadruple of the model in the chart of p.
template <class F>
void visit_base(const ModelInfo& m, const ChartPoint& p, F&& f) {
  if (m.kind == ModelKind::kFlatCosymplectic) {
    require_in_chart(GlobalChart{}, p);
    f(FlatR5{});
  } else {
    with_s5_chart(p, [&](const RoundS5& q) {
      f(q);
      return 0;
    });
  }
}

template <class Q>
inline constexpr bool kIsS5 = std::is_same_v<Q, RoundS5>;

inline double max_value(const ResidualMap& m) {
  double r = 0.0;
  for (const auto& [k, v] : m) r = std::isnan(v) || std::isnan(r) ? std::numeric_limits<double>::quiet_NaN()
                                                                     : std::max(r, v);
  return r;
}

// g(R(e_a, e_b) xi - expected(e_a, e_b), e_l), measured in `frame`.
template <class Fn>
double curvature_xi_residual(const Tensor4<double>& r, const Mat<double>& g, const Vec<double>& xi,
                             const Mat<double>& frame, Fn expected) {
  Tensor3<double> out;
  for (int a = 0; a < kDim; ++a)
    for (int b = 0; b < kDim; ++b) {
      const V5 Z = basis_vector(a);
      const V5 X = basis_vector(b);
      const Vec<double> v = contract_slot(apply_curvature(r, Z, X, xi) - expected(Z, X), 0, g);
      for (int l = 0; l < kDim; ++l) out(a, b, l) = v(l);
    }
  return frame_max(out, frame);
}

// Difference of two connections as the tensor g(D(e_i, e_j), e_l) in a frame.
template <class C1, class C2>
double connection_difference(const C1& c1, const C2& c2, const Mat<double>& g, const Mat<double>& frame,
                             const Point<double>& x) {
  const Tensor3<double> d = c1.gamma(x) - c2.gamma(x);
  return frame_max(lower_torsion(d, g), frame);
}

// Least-squares fit of R(Z, X) xi on
//   b0 = eta(X)Z - eta(Z)X, b1 = eta(X) phi1t Z - eta(Z) phi1t X, b2 = W1t(Z, X) xi,
// with rows g(R(Z, X)xi, W) over orthonormal-frame triples. Returns
// (coefficients, max residual).
struct XiFitRows {
  std::vector<std::array<double, 4>> rows;  // b0, b1, b2, target
};

inline void add_xi_fit_rows(XiFitRows& out, const Tensor4<double>& r, const Su2Local& se) {
  const auto& E = se.frame;
  auto col = [&](int a) {
    V5 v;
    for (int k = 0; k < kDim; ++k) v(k) = E(k, a);
    return v;
  };
  for (int a = 0; a < kDim; ++a)
    for (int b = 0; b < kDim; ++b)
      for (int c = 0; c < kDim; ++c) {
        const V5 Z = col(a), X = col(b), W = col(c);
        const double ex = pair(se.eta, X), ez = pair(se.eta, Z), ew = pair(se.eta, W);
        const double b0 = ex * bilinear(se.g, Z, W) - ez * bilinear(se.g, X, W);
        const double b1 = ex * bilinear(se.omega[0], Z, W) - ez * bilinear(se.omega[0], X, W);
        const double b2 = bilinear(se.omega[0], Z, X) * ew;
        out.rows.push_back({b0, b1, b2, bilinear(se.g, apply_curvature(r, Z, X, se.xi), W)});
      }
}

inline std::pair<std::array<double, 3>, double> solve_xi_fit(const XiFitRows& f) {
  const auto n = static_cast<Eigen::Index>(f.rows.size());
  Eigen::MatrixXd a(n, 3);
  Eigen::VectorXd b(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (int k = 0; k < 3; ++k) a(i, k) = f.rows[i][k];
    b(i) = f.rows[i][3];
  }
  const Eigen::VectorXd c = a.colPivHouseholderQr().solve(b);
  return {{c(0), c(1), c(2)}, n ? (a * c - b).cwiseAbs().maxCoeff() : 0.0};
}

// ---------------------------------------------------------------------------
// acm: algebraic compatibility, musical isomorphisms, Killing, d^2 = 0, SU(2)
// algebra, chart independence.

inline std::vector<CheckSpec> acm_specs(const ModelInfo& m, const SuiteParams&) {
  SpecList s{"acm", {}};
  s.add("acm.compat.base", tol::kAlgebraic,
        "almost contact metric compatibility of the base members phi1, phi2, phi3");
  s.add("acm.compat.circle", tol::kAlgebraic, "almost contact metric compatibility of the circle family");
  s.add("acm.compat.dhom", tol::kAlgebraic,
        "almost contact metric compatibility of D-homothetic images (every a in the grid)");
  s.add("acm.fundamental_form.xi", tol::kAlgebraic, "fundamental form: F(xi, .) = 0");
  s.add("acm.fundamental_form.rank", tol::kAlgebraic, "fundamental form: rank F = 4");
  s.add("acm.musical.roundtrip", tol::kRoundTrip, "musical isomorphisms and endomorphism/2-form round trip");
  s.add("acm.killing", tol::kFirstDerivative, "xi is Killing and (nabla_X eta)Y = 1/2 d eta(X, Y)");
  s.add("acm.d_squared", tol::kCurvature, "d^2 = 0 on eta and the structure 2-forms");
  s.add("su2.wedge", tol::kAlgebraic, "SU(2) structure: w_i ^ w_j = delta_ij v");
  s.add("su2.phi_products", tol::kAlgebraic, "SU(2) structure: quaternionic products of phi1, phi2, phi3");
  s.add("su2.orientation", tol::kAlgebraic, "SU(2) structure: orientation condition");
  s.add("su2.volume", tol::kAlgebraic, "SU(2) structure: (v ^ eta)(orthonormal frame) = 2");
  if (m.kind != ModelKind::kFlatCosymplectic)
    s.add("chart.independence", tol::kCurvature, "scalar invariants agree in the north and south charts");
  return s.specs;
}

template <class Q>
void su2_algebra(Accumulator& acc, const Q& quad, const DerivativeEngine& eng, const Point<double>& x) {
  auto r = su2_algebraic_residuals(su2_local(quad, eng, x));
  acc.add("su2.wedge", r.at("su2.wedge"));
  acc.add("su2.phi_products", r.at("su2.phi_products"));
  acc.add("su2.orientation", r.at("su2.orientation"));
  acc.add("su2.volume", std::abs(r.at("su2.volume_value") - 2.0));
}

template <class Q>
double musical_roundtrip(const Q& quad, const Point<double>& x) {
  const auto g = quad.metric(x);
  const auto gi = inverse(g);
  const auto frame = orthonormal_frame(g);
  const auto eta = quad.eta(x);
  double r = frame_max(lower_index(raise_index(eta, 0, gi), 0, g) - eta, frame);
  for (int i = 1; i <= 3; ++i) {
    const auto w = quad.omega(i, x);
    r = std::max(r, frame_max(two_form_from_endo(endo_from_two_form(w, gi), g) - w, frame));
  }
  return r;
}

template <class Q>
double d_squared(const Q& quad, const DerivativeEngine& eng, const Point<double>& x) {
  const auto frame = orthonormal_frame(quad.metric(x));
  auto dd = [&](const auto& form) {
    return frame_max(
        exterior_derivative(eng, [&](const auto& y) { return exterior_derivative(eng, form, y); }, x), frame);
  };
  double r = dd([&quad](const auto& y) { return quad.eta(y); });
  for (int i = 1; i <= 3; ++i) r = std::max(r, dd([&quad, i](const auto& y) { return quad.omega(i, y); }));
  return r;
}

template <class S>
double killing(const S& s, const DerivativeEngine& eng, const Point<double>& x) {
  const auto k = killing_residual(s, [&s](const auto& y) { return s.xi(y); }, eng, x);
  return std::max(k.symmetric, k.half_deta);
}

inline void run_acm(SuiteContext& ctx) {
  const auto& P = ctx.params;
  const double lam = ctx.lambda;
  auto per_point = ctx.map_points<Accumulator>([&](const ChartPoint& p, std::string& stage) {
    Accumulator acc;
    const auto& x = p.coords;
    const auto& eng = ctx.eng();
    visit_base(ctx.model, p, [&](const auto& q) {
      using Q = std::decay_t<decltype(q)>;
      stage = "acm.compat";
      for (int i = 1; i <= 3; ++i) acc.add("acm.compat.base", max_value(acm_compatibility_residuals(Member<Q>(q, i), p)));
      for (double t : P.t) {
        for (int i = 1; i <= 3; ++i)
          acc.add("acm.compat.circle",
                  max_value(acm_compatibility_residuals(Member<RotatedNc<Q>>(rotated_nc(q, lam, t), i), p)));
        for (double a : P.a)
          for (int i = 1; i <= 3; ++i)
            acc.add("acm.compat.dhom",
                    max_value(acm_compatibility_residuals(Member<AncQuadruple<Q>>(anc_quadruple(q, lam, t, a), i), p)));
      }
      stage = "acm.fundamental_form";
      auto ff = [&](const auto& s) {
        const auto r = fundamental_form_residuals(s, p);
        acc.add("acm.fundamental_form.xi", r.at("F_xi"));
        acc.add("acm.fundamental_form.rank", r.at("F_rank_defect"));
      };
      for (int i = 1; i <= 3; ++i) ff(Member<Q>(q, i));
      for (double t : P.t)
        for (int i = 1; i <= 3; ++i) ff(Member<AncQuadruple<Q>>(anc_quadruple(q, lam, t), i));

      stage = "acm.musical.roundtrip";
      acc.add("acm.musical.roundtrip", musical_roundtrip(q, x));
      for (double t : P.t) acc.add("acm.musical.roundtrip", musical_roundtrip(anc_quadruple(q, lam, t), x));

      stage = "acm.killing";
      acc.add("acm.killing", killing(q, eng, x));
      for (double a : P.a) acc.add("acm.killing", killing(anc_quadruple(q, lam, 0.0, a), eng, x));

      stage = "acm.d_squared";
      acc.add("acm.d_squared", d_squared(q, eng, x));
      acc.add("acm.d_squared", d_squared(anc_quadruple(q, lam, P.t.front()), eng, x));

      stage = "su2";
      su2_algebra(acc, q, eng, x);
      for (double t : P.t) {
        su2_algebra(acc, rotated_nc(q, lam, t), eng, x);
        su2_algebra(acc, anc_quadruple(q, lam, t), eng, x);
      }
    });
    return acc;
  });
  for (const auto& a : per_point) ctx.acc.merge(a);
  if (ctx.s5()) {
    const std::size_t n = std::min<std::size_t>(P.samples, 10);
    for (double t : P.t) ctx.acc.add("chart.independence", s5_chart_independence(P.seed, n, t), n);
  }
}

// ---------------------------------------------------------------------------
// anc_identities: structure classes along the chain, the relations between
// d eta, dF and h, lambda-type, eta-Einstein Ricci.

inline constexpr const char* kAxIds[] = {"ax.deta_dF_phi_second", "ax.deta_dF_phi_first", "ax.deta_xi",
                                         "ax.deta_phi_symmetric", "ax.deta_dF_phi_phi",
                                         "ax.deta_minus_dF_xi", "ax.dF_phi_cubed"};

inline bool fit_possible(const SuiteParams& p) { return p.samples * p.t.size() >= kMinFitSamples; }

inline std::vector<CheckSpec> anc_specs(const ModelInfo& m, const SuiteParams& P) {
  SpecList s{"anc_identities", {}};
  if (m.kind == ModelKind::kFlatCosymplectic)
    s.add("class.cosymplectic.base", tol::kFirstDerivative, "base members are cosymplectic: nabla phi = 0");
  else
    s.add("class.sasakian.base", tol::kFirstDerivative,
          "base (phi3, xi, eta, g) is Sasakian: (nabla_X phi)Y = g(X, Y)xi - eta(Y)X");
  s.add("class.nc.circle", tol::kFirstDerivative,
        "circle family members phi1t, phi2t are nearly cosymplectic: (nabla_X phi)X = 0");
  s.add("class.anc.dhom", tol::kFirstDerivative,
        "D-homothetic image (a = 3/2) of the nearly cosymplectic family is almost-nearly cosymplectic");
  const char* ax_refs[] = {
      "ANC relation: d eta(phi X, Y) against dF(X, Y, xi)",
      "ANC relation: d eta(X, phi Y) against dF(X, Y, xi)",
      "ANC relation: xi _| d eta = 0",
      "ANC relation: d eta(phi X, phi Y) = d eta(X, Y)",
      "ANC relation: d eta(X, Z) against dF(phi X, phi Z, xi)",
      "ANC relation: d eta and dF(., ., xi) coincide up to the structure constant",
      "ANC relation: dF(phi X, phi Y, phi Z) against dF(X, Y, Z)"};
  for (std::size_t k = 0; k < std::size(kAxIds); ++k) s.add(kAxIds[k], tol::kFirstDerivative, ax_refs[k]);
  s.add("h.skew", tol::kFirstDerivative, "h is g-skew: g(hX, Y) = -g(X, hY)");
  s.add("h.half_deta", tol::kFirstDerivative, "g(hX, Y) = 1/2 d eta(X, Y)");
  s.add("h.xi", tol::kFirstDerivative, "h xi = 0");
  s.add("h.eta", tol::kFirstDerivative, "eta o h = 0");
  s.add("h.phi_anticommute", tol::kFirstDerivative, "phi h + h phi = 0");
  s.add("h.nabla_phi_xi", tol::kFirstDerivative, "(nabla_X phi) xi = -phi h X");
  s.add("h.square_lambda", tol::kFirstDerivative, "lambda-type: h^2 = -lambda^2 (id - eta x xi)");
  s.add("h.trace_h2", tol::kFirstDerivative, "tr h^2 = -4 lambda^2 is constant");
  s.add("h.lambda_estimate", tol::kFirstDerivative, "lambda extracted from the spectrum of -h^2 matches lambda");
  s.add("nc.deta_phi", tol::kFirstDerivative, "nearly cosymplectic: d eta(phi X, Y) = d eta(X, phi Y)");
  s.add("nc.nabla_phi_h", tol::kFirstDerivative,
        "nearly cosymplectic: g((nabla_X phi)Y, hZ) = eta(Y)g(h^2 X, phi Z) - eta(X)g(h^2 Y, phi Z)");
  s.add("nc.nabla_h", tol::kCurvature,
        "nearly cosymplectic: g((nabla_X h)Y, Z) = g(h^2 X, Y)eta(Z) - eta(Y)g(h^2 X, Z)");
  s.add("anc.nabla_phi_h", tol::kFirstDerivative, "ANC: g((nabla_X phi)Y, hZ) = eta(Y) g(h^2 X, phi Z)");
  s.add("anc.nabla_h_closed", tol::kCurvature,
        "ANC: g((nabla_X h)Y, Z) = -eta(Y) g(h^2 X, Z) + eta(Z) g(h^2 X, Y)");
  s.add("anc.nabla_h_curvature", tol::kCurvature, "ANC: -R(xi, X, Y, Z) = g((nabla_X h)Y, Z)");
  if (fit_possible(P)) {
    s.add("anc.eta_einstein.a", tol::kCoefficient, "ANC Ricci is eta-Einstein: Ric = a g + b eta x eta, a = 2 lambda^2");
    s.add("anc.eta_einstein.b", tol::kCoefficient, "ANC Ricci is eta-Einstein: Ric = a g + b eta x eta, b = 2 lambda^2");
    s.add("anc.eta_einstein.residual", tol::kRicciFit, "ANC Ricci is eta-Einstein: pooled fit residual");
    s.add("anc.eta_einstein.spread", tol::kSpread, "ANC Ricci is eta-Einstein: pointwise coefficient spread");
  }
  s.add("anc.scalar", tol::kCoefficient, "ANC scalar curvature = 12 lambda^2");
  return s.specs;
}

struct AncPoint {
  Accumulator acc;
  std::vector<RicciSample> ricci;
  HSpectrum spectrum;
  double killing = 0.0;
};

inline void run_anc(SuiteContext& ctx) {
  const auto& P = ctx.params;
  const double lam = ctx.lambda;
  auto per_point = ctx.map_points<AncPoint>([&](const ChartPoint& p, std::string& stage) {
    AncPoint out;
    Accumulator& acc = out.acc;
    const auto& x = p.coords;
    const auto& eng = ctx.eng();
    visit_base(ctx.model, p, [&](const auto& q) {
      using Q = std::decay_t<decltype(q)>;
      stage = "class.base";
      if constexpr (kIsS5<Q>) {
        acc.add("class.sasakian.base", class_residuals(acm_local(Member<Q>(q, 3), eng, x)).at("sasakian"));
      } else {
        for (int i = 1; i <= 3; ++i)
          acc.add("class.cosymplectic.base", class_residuals(acm_local(Member<Q>(q, i), eng, x)).at("cosymplectic"));
      }
      for (double t : P.t) {
        const auto ncq = rotated_nc(q, lam, t);
        const auto ancq = anc_quadruple(q, lam, t);
        stage = "anc.curvature";
        const Member<AncQuadruple<Q>> anc2(ancq, 2);
        const LeviCivita<Member<AncQuadruple<Q>>> lc(anc2, eng);
        const auto g = anc2.metric(x);
        const auto curv = curvature(lc, g, x);
        out.ricci.push_back({curv.ricci, g, anc2.eta(x)});
        acc.add("anc.scalar", std::abs(curv.scalar - 12.0 * lam * lam));
        for (int i = 1; i <= 2; ++i) {
          stage = "class.nc.circle";
          const Member<RotatedNc<Q>> ncm(ncq, i);
          const AcmLocal Ln = acm_local(ncm, eng, x);
          acc.add("class.nc.circle", class_residuals(Ln).at("nearly_cosymplectic"));
          stage = "nc";
          acc.add_all(nc_h_residuals(Ln, nabla_h_lowered(ncm, eng, x)));
          acc.add("h.square_lambda", h_square_residual(Ln, lam));

          stage = "class.anc.dhom";
          const Member<AncQuadruple<Q>> am(ancq, i);
          const AcmLocal La = acm_local(am, eng, x);
          acc.add("class.anc.dhom", class_residuals(La).at("anc"));
          stage = "ax";
          acc.add_all(ax_relations_residuals(La));
          stage = "h";
          acc.add_all(h_lemma_residuals(La));
          acc.add("h.square_lambda", h_square_residual(La, lam));
          acc.add("h.trace_h2", std::abs(trace_h_squared(La) + 4.0 * lam * lam));
          stage = "anc";
          acc.add_all(anc_h_residuals(La, nabla_h_lowered(am, eng, x), curv.riemann));
          if (i == 2 && t == P.t.front()) {
            out.spectrum = h_spectrum(La);
            out.killing = killing_residual(am, [&am](const auto& y) { return am.xi(y); }, eng, x).symmetric;
          }
        }
      }
    });
    return out;
  });

  std::vector<RicciSample> ricci;
  std::vector<HSpectrum> spectra;
  double kill = 0.0;
  for (const auto& pp : per_point) {
    ctx.acc.merge(pp.acc);
    ricci.insert(ricci.end(), pp.ricci.begin(), pp.ricci.end());
    spectra.push_back(pp.spectrum);
    kill = std::max(kill, pp.killing);
  }

  const auto est = estimate_lambda(spectra, kill);
  ctx.acc.add("h.lambda_estimate", est.lambda_type ? std::abs(est.lambda - lam)
                                                   : std::numeric_limits<double>::quiet_NaN(),
              spectra.size());
  ctx.findings.push_back({"anc.lambda_estimate",
                          est.lambda_type ? (est.note.empty() ? "lambda-type" : est.note) : est.note,
                          {{"lambda", est.lambda}, {"relative_spread", est.spread}, {"killing", kill}}});

  if (fit_possible(P)) {
    const auto fit = eta_einstein_fit(ricci);
    const double l2 = lam * lam;
    ctx.acc.add("anc.eta_einstein.a", std::abs(fit.a - 2.0 * l2), ricci.size());
    ctx.acc.add("anc.eta_einstein.b", std::abs(fit.b - 2.0 * l2), ricci.size());
    ctx.acc.add("anc.eta_einstein.residual", fit.residual, ricci.size());
    ctx.acc.add("anc.eta_einstein.spread", fit.spread, ricci.size());
    ctx.findings.push_back({"anc.eta_einstein.fit", "Ric = a g + b eta x eta, expected a = b = 2 lambda^2",
                            {{"a", fit.a}, {"b", fit.b}, {"residual", fit.residual}, {"spread", fit.spread}}});
  }
}

// ---------------------------------------------------------------------------
// su2_systems: exterior differential systems along the chain, homotheties to
// unit constants, the attached Sasaki-Einstein structure.

inline std::vector<CheckSpec> su2_specs(const ModelInfo& m, const SuiteParams&) {
  SpecList s{"su2_systems", {}};
  const bool s5 = m.kind != ModelKind::kFlatCosymplectic;
  if (s5) {
    s.add("su2.se.deta", tol::kFirstDerivative, "Sasaki-Einstein system: d eta = -2 w3");
    s.add("su2.se.domega1", tol::kFirstDerivative, "Sasaki-Einstein system: d w1 = 3 eta ^ w2");
    s.add("su2.se.domega2", tol::kFirstDerivative, "Sasaki-Einstein system: d w2 = -3 eta ^ w1");
  }
  s.add("su2.hypo", tol::kFirstDerivative, "hypo system: d w3 = 0, d(eta ^ w1) = 0, d(eta ^ w2) = 0");
  s.add("su2.nc_lambda.circle", tol::kFirstDerivative,
        "nearly cosymplectic system: d eta = -2 lambda w3, d w1 = 3 lambda eta ^ w2, d w2 = -3 lambda eta ^ w1");
  s.add("su2.anc_lambda.dhom", tol::kFirstDerivative,
        "ANC system: d eta = -2 lambda w3, d w1 = 2 lambda eta ^ w2, d w2 = -2 lambda eta ^ w1");
  if (s5) {
    s.add("su2.homothetic_unit.nc", tol::kFirstDerivative,
          "homothety by lambda takes the nearly cosymplectic system to the Sasaki-Einstein one");
    s.add("su2.homothetic_unit.anc", tol::kFirstDerivative,
          "homothety by lambda takes the lambda-ANC system to the one with lambda = 1");
    s.add("su2.attached.se_system", tol::kCurvature, "attached structure satisfies the Sasaki-Einstein system");
    s.add("su2.attached.roundtrip", tol::kFirstDerivative,
          "attached Sasaki-Einstein structure coincides with the rotated base quadruple");
    s.add("su2.attached.ricci", tol::kEinstein, "attached structure is Einstein: Ric = 4 g");
    s.add("su2.attached.scalar", tol::kEinstein, "attached structure: scalar curvature 20");
  } else {
    s.add("su2.attached.rejects_cosymplectic", tol::kAlgebraic,
          "no attached Sasaki-Einstein structure when lambda = 0");
  }
  return s.specs;
}

inline void run_su2(SuiteContext& ctx) {
  const auto& P = ctx.params;
  const double lam = ctx.lambda;
  auto per_point = ctx.map_points<Accumulator>([&](const ChartPoint& p, std::string& stage) {
    Accumulator acc;
    const auto& x = p.coords;
    const auto& eng = ctx.eng();
    visit_base(ctx.model, p, [&](const auto& q) {
      using Q = std::decay_t<decltype(q)>;
      stage = "su2.hypo";
      const auto rb = su2_system_residuals(su2_local(q, eng, x), lam);
      acc.add("su2.hypo", rb.at("hypo"));
      if constexpr (kIsS5<Q>) {
        stage = "su2.se";
        acc.add("su2.se.deta", rb.at("sasaki_einstein.deta"));
        acc.add("su2.se.domega1", rb.at("sasaki_einstein.domega1"));
        acc.add("su2.se.domega2", rb.at("sasaki_einstein.domega2"));
        stage = "su2.homothetic_unit.nc";
        const Homothety<NcQuadruple<Q>> hn(nc_quadruple(q, lam), lam);
        acc.add("su2.homothetic_unit.nc", su2_system_residuals(su2_local(hn, eng, x), 1.0).at("sasaki_einstein"));
      }
      for (double t : P.t) {
        stage = "su2.nc_lambda.circle";
        const auto rn = su2_system_residuals(su2_local(rotated_nc(q, lam, t), eng, x), lam);
        acc.add("su2.nc_lambda.circle", rn.at("nc_lambda"));
        acc.add("su2.hypo", rn.at("hypo"));
        stage = "su2.anc_lambda.dhom";
        const auto ancq = anc_quadruple(q, lam, t);
        const auto ra = su2_system_residuals(su2_local(ancq, eng, x), lam);
        acc.add("su2.anc_lambda.dhom", ra.at("anc_lambda"));
        acc.add("su2.hypo", ra.at("hypo"));
        const Member<AncQuadruple<Q>> anc2(ancq, 2);
        if constexpr (kIsS5<Q>) {
          stage = "su2.homothetic_unit.anc";
          const Homothety<AncQuadruple<Q>> ha(ancq, lam);
          acc.add("su2.homothetic_unit.anc", su2_system_residuals(su2_local(ha, eng, x), 1.0).at("anc_lambda"));

          stage = "su2.attached";
          const AttachedSasakiEinstein<Member<AncQuadruple<Q>>> se(anc2, lam, eng);
          acc.add("su2.attached.se_system",
                  su2_system_residuals(su2_local(se, eng, x), 1.0).at("sasaki_einstein"));
          const Rotated<Q> rq(q, t);
          const auto g = rq.metric(x);
          const auto frame = orthonormal_frame(g);
          double rt = std::max(frame_max(se.metric(x) - g, frame), frame_max(se.eta(x) - rq.eta(x), frame));
          for (int i = 1; i <= 3; ++i) rt = std::max(rt, frame_max(se.omega(i, x) - rq.omega(i, x), frame));
          acc.add("su2.attached.roundtrip", rt);
          const auto c = curvature(LeviCivita<decltype(se)>(se, eng), se.metric(x), x);
          acc.add("su2.attached.ricci", frame_max(c.ricci - 4.0 * se.metric(x), orthonormal_frame(se.metric(x))));
          acc.add("su2.attached.scalar", std::abs(c.scalar - 20.0));
        } else {
          stage = "su2.attached.rejects_cosymplectic";
          const auto est = estimate_lambda({h_spectrum(acm_local(anc2, eng, x))}, 0.0);
          double r = 1.0;
          try {
            (void)attach_sasaki_einstein(anc2, est, eng);
          } catch (const UnsupportedInput&) {
            r = 0.0;
          }
          acc.add("su2.attached.rejects_cosymplectic", r);
        }
      }
    });
    return acc;
  });
  for (const auto& a : per_point) ctx.acc.merge(a);
}

// ---------------------------------------------------------------------------
// dhom: D-homothetic deformations and the curvature relations they induce.

inline std::vector<CheckSpec> dhom_specs(const ModelInfo& m, const SuiteParams&) {
  SpecList s{"dhom", {}};
  s.add("dhom.compat", tol::kAlgebraic, "D-homothetic image is an almost contact metric structure");
  s.add("dhom.F_scaling", tol::kAlgebraic, "D-homothety scales the fundamental form: F' = a F");
  s.add("dhom.roundtrip", tol::kRoundTrip, "D-homothety by a followed by 1/a recovers all fields");
  s.add("dhom.h_invariance", tol::kHInvariance, "h' = h under D-homothety of a nearly cosymplectic structure");
  s.add("dhom.killing", tol::kFirstDerivative, "xi' is Killing for g'");
  s.add("dhom.connection_relation", tol::kFirstDerivative,
        "Levi-Civita connections: g(nabla'_X Y - nabla_X Y, Z) = (a^2 - a)/(2a)[d eta(X, Z)eta(Y) + d eta(Y, Z)eta(X)]");
  s.add("dhom.nc_recovery", tol::kFirstDerivative,
        "D-homothety by 2/3 of the ANC structure is nearly cosymplectic");
  s.add("dhom.curvature_nc", tol::kCurvature, "ANC curvature in terms of the nearly cosymplectic curvature and h");
  s.add("dhom.ricci_nc", tol::kCurvature,
        "ANC Ricci: Ric' = Ric + g(h^2 ., .) - 5/4 tr(h^2) eta x eta");
  if (m.kind != ModelKind::kFlatCosymplectic)
    s.add("dhom.curvature_se", tol::kCurvature,
          "ANC curvature in terms of the attached Sasaki-Einstein curvature");
  s.add("dhom.curvature_xi", tol::kCurvature, "ANC: R'(Z, X) xi' = lambda^2 [eta'(X)Z - eta'(Z)X]");
  return s.specs;
}

template <class A>
double acm_field_difference(const A& s1, const A& s2, const Point<double>& x) {
  const auto g = s1.metric(x);
  const auto frame = orthonormal_frame(g);
  double r = frame_max(s2.metric(x) - g, frame);
  r = std::max(r, frame_max(s2.eta(x) - s1.eta(x), frame));
  r = std::max(r, frame_max(contract_slot(s2.xi(x) - s1.xi(x), 0, g), frame));
  r = std::max(r, frame_max(lower_endo(s2.phi(x) - s1.phi(x), g), frame));
  return r;
}

inline void run_dhom(SuiteContext& ctx) {
  const auto& P = ctx.params;
  const double lam = ctx.lambda;
  auto per_point = ctx.map_points<Accumulator>([&](const ChartPoint& p, std::string& stage) {
    Accumulator acc;
    const auto& x = p.coords;
    const auto& eng = ctx.eng();
    visit_base(ctx.model, p, [&](const auto& q) {
      using Q = std::decay_t<decltype(q)>;
      using NcM = Member<RotatedNc<Q>>;
      std::optional<Tensor4<double>> r_se;
      std::optional<Su2Local> se_local;
      for (double t : P.t) {
        const NcM m(rotated_nc(q, lam, t), 2);
        const AcmLocal Ln = acm_local(m, eng, x);
        for (double a : P.a) {
          const DHomothety<NcM> dm(m, a);
          stage = "dhom.compat";
          acc.add("dhom.compat", max_value(acm_compatibility_residuals(dm, p)));
          stage = "dhom.F_scaling";
          acc.add("dhom.F_scaling", frame_max(fundamental_form(dm, x) - a * fundamental_form(m, x),
                                              orthonormal_frame(dm.metric(x))));
          stage = "dhom.roundtrip";
          const DHomothety<DHomothety<NcM>> back(dm, 1.0 / a);
          const auto g = m.metric(x);
          const auto fr = orthonormal_frame(g);
          double rt = std::max(frame_max(back.metric(x) - g, fr), frame_max(back.eta(x) - m.eta(x), fr));
          rt = std::max(rt, frame_max(contract_slot(back.xi(x) - m.xi(x), 0, g), fr));
          rt = std::max(rt, frame_max(lower_endo(back.phi(x) - m.phi(x), g), fr));
          acc.add("dhom.roundtrip", rt);
          stage = "dhom.h_invariance";
          const AcmLocal Ld = acm_local(dm, eng, x);
          acc.add("dhom.h_invariance", max_abs(endo_to_frame(Ld.h - Ln.h, Ld.frame)));
          stage = "dhom.killing";
          acc.add("dhom.killing", killing(dm, eng, x));
          stage = "dhom.connection_relation";
          acc.add("dhom.connection_relation", dhom_connection_relation_residual(m, a, eng, x));
        }
        stage = "dhom.nc_recovery";
        const DHomothety<NcM> anc(m, kAncConstant);
        const DHomothety<DHomothety<NcM>> rec(anc, 1.0 / kAncConstant);
        acc.add("dhom.nc_recovery", class_residuals(acm_local(rec, eng, x)).at("nearly_cosymplectic"));

        stage = "dhom.curvature_nc";
        const auto r_anc = riemann(LeviCivita<DHomothety<NcM>>(anc, eng), x);
        const auto r_nc = riemann(LeviCivita<NcM>(m, eng), x);
        const auto rel = anc_nc_curvature_residuals(r_anc, r_nc, Ln);
        acc.add("dhom.curvature_nc", rel.at("curvature_nc"));
        acc.add("dhom.ricci_nc", rel.at("ricci_nc"));
        stage = "dhom.curvature_xi";
        acc.add("dhom.curvature_xi", anc_curvature_xi_residual(r_anc, acm_local(anc, eng, x), lam));
        if constexpr (kIsS5<Q>) {
          stage = "dhom.curvature_se";
          if (!r_se) r_se = riemann(LeviCivita<Q>(q, eng), x);
          acc.add("dhom.curvature_se", anc_se_curvature_residual(r_anc, *r_se, su2_local(Rotated<Q>(q, t), eng, x)));
        }
      }
    });
    return acc;
  });
  for (const auto& a : per_point) ctx.acc.merge(a);
}

// ---------------------------------------------------------------------------
// ngts_metricity: torsion, the two constructions of the connection, the
// metricity condition and its displayed components, nabla phi formulas.

inline std::vector<CheckSpec> ngts_metricity_specs(const ModelInfo& m, const SuiteParams&) {
  SpecList s{"ngts_metricity", {}};
  const bool s5 = m.kind != ModelKind::kFlatCosymplectic;
  s.add("ngts.torsion.skew", tol::kSkew, "torsion is totally skew-symmetric");
  s.add("ngts.torsion.dF", tol::kFirstDerivative, "torsion: g(T(X, Y), Z) = -1/3 dF(X, Y, Z)");
  s.add("ngts.torsion.family_T1", tol::kFirstDerivative,
        "torsion of the phi1t connection equals the eta-cyclic family form T1(t)");
  s.add("ngts.torsion.family_T2", tol::kFirstDerivative,
        "torsion of the phi2t connection equals the eta-cyclic family form T2(t)");
  s.add("ngts.torsion.reindex", tol::kFirstDerivative, "T1(t) = -T2(t + pi/2)");
  s.add("ngts.torsion.path_b", tol::kFirstDerivative,
        "torsion of the family connection equals -1/3 dF of the phi1t ANC structure");
  s.add("ngts.connection.path_equality", tol::kPathEquality,
        "connection from the ANC formula equals the family formula built on the Levi-Civita connection");
  if (s5)
    s.add("ngts.connection.lambda_independence", tol::kPathEquality,
          "family connection does not depend on lambda");
  else {
    s.add("ngts.torsion.zero", tol::kFlat, "cosymplectic case: torsion vanishes");
    s.add("ngts.connection.levi_civita", tol::kFlat, "cosymplectic case: the connection is Levi-Civita");
  }
  s.add("ngts.metricity.full", tol::kFirstDerivative, "metricity: (nabla_X G)(Y, Z) = -G(T(X, Y), Z), G = g + F");
  s.add("ngts.metricity.coordinate", tol::kFirstDerivative,
        "metricity in coordinates: d_m G_ij - Gamma^p_im G_pj - Gamma^p_mj G_ip = 0");
  s.add("ngts.metricity.G_display", tol::kFirstDerivative,
        "(nabla_X G)(Y, Z) = 1/3 [dF(X, Y, Z) - dF(X, Y, phi Z)]");
  s.add("ngts.metricity.g_display", tol::kFirstDerivative,
        "(nabla_X g)(Y, Z) = 1/6 [eta(Y) d eta(Z, X) + eta(Z) d eta(Y, X)] (as commonly written)");
  s.add("ngts.metricity.F_display", tol::kFirstDerivative,
        "(nabla_X F)(Y, Z) = 1/3 [dF(X, Y, Z) - dF(X, Y, phi Z)] - 1/6 [eta(Y) d eta(Z, X) + eta(Z) d eta(Y, X)] "
        "(as commonly written)");
  s.add("ngts.metricity.g_display_eta_negated", tol::kFirstDerivative,
        "(nabla_X g)(Y, Z) = -1/6 [eta(Y) d eta(Z, X) + eta(Z) d eta(Y, X)]");
  s.add("ngts.metricity.F_display_eta_negated", tol::kFirstDerivative,
        "(nabla_X F)(Y, Z) = 1/3 [dF(X, Y, Z) - dF(X, Y, phi Z)] + 1/6 [eta(Y) d eta(Z, X) + eta(Z) d eta(Y, X)]");
  s.add("ngts.nabla_phi.phi2t", tol::kFirstDerivative, "g((nabla_X phi2t)Y, Z) = -lambda C(phi1t)(X, Y, Z)");
  s.add("ngts.nabla_phi.phi1t", tol::kFirstDerivative, "g((nabla_X phi1t)Y, Z) = lambda C(phi2t)(X, Y, Z)");
  s.add("ngts.nabla_phi.phi3", tol::kFirstDerivative,
        "g((nabla_X phi3)Y, Z) = lambda [g(X, Y)eta(Z) - g(X, Z)eta(Y)]");
  return s.specs;
}

struct MetricityPoint {
  Accumulator acc;
  Accumulator printed;  // the as-printed variant, for findings
};

inline void run_ngts_metricity(SuiteContext& ctx) {
  const auto& P = ctx.params;
  const double lam = ctx.lambda;
  auto per_point = ctx.map_points<MetricityPoint>([&](const ChartPoint& p, std::string& stage) {
    MetricityPoint out;
    Accumulator& acc = out.acc;
    const auto& x = p.coords;
    const auto& eng = ctx.eng();
    visit_base(ctx.model, p, [&](const auto& q) {
      using Q = std::decay_t<decltype(q)>;
      using AncM = Member<AncQuadruple<Q>>;
      const Member<RotatedNc<Q>> nc0(rotated_nc(q, lam, 0.0), 2);
      const AcmLocal L0 = acm_local(nc0, eng, x);
      for (double t : P.t) {
        const auto ancq = anc_quadruple(q, lam, t);
        const AncM m1(ancq, 1), m2(ancq, 2);
        const auto g = m1.metric(x);
        const auto eta = m1.eta(x);
        const auto xi = m1.xi(x);
        const auto frame = orthonormal_frame(g, &xi);
        const NgtsConnection<AncM> c1(m1, eng), c2(m2, eng);
        const NgtsFamilyConnection<NcQuadruple<Q>> cb(nc_quadruple(q, lam), t, lam, eng);

        stage = "ngts.torsion.skew";
        acc.add("ngts.torsion.skew", totally_skew_residual(c1, g, x));
        acc.add("ngts.torsion.skew", totally_skew_residual(c2, g, x));
        acc.add("ngts.torsion.skew", totally_skew_residual(cb, g, x));

        stage = "ngts.metricity";
        for (const auto& mr : {metricity_residuals(c1, m1, x), metricity_residuals(c2, m2, x)}) {
          for (const char* k : {"full", "coordinate", "G_display", "g_display", "F_display",
                                "g_display_eta_negated", "F_display_eta_negated"})
            acc.add(std::string("ngts.metricity.") + k, mr.at(k));
          acc.add("ngts.torsion.dF", mr.at("torsion_dF"));
          acc.add("ngts.torsion.skew", mr.at("torsion_skew"));
        }
        stage = "ngts.metricity (as printed)";
        out.printed.add_all(metricity_residuals(NgtsConnection<AncM>(m1, eng, NgtsVariant::kAsPrinted), m1, x));
        out.printed.add(
            "path_equality",
            connection_difference(NgtsConnection<AncM>(m1, eng, NgtsVariant::kAsPrinted),
                                  NgtsFamilyConnection<NcQuadruple<Q>>(nc_quadruple(q, lam), t, lam, eng,
                                                                       NgtsVariant::kAsPrinted),
                                  g, frame, x));

        stage = "ngts.torsion.family";
        const auto T1 = lower_torsion(torsion(c1, x), g);
        const auto T2 = lower_torsion(torsion(c2, x), g);
        const auto disp = family_torsion_displays(eta, g, L0.phi, L0.h, t, lam);
        acc.add("ngts.torsion.family_T1", frame_max(T1 - disp.t1, frame));
        acc.add("ngts.torsion.family_T2", frame_max(T2 - disp.t2, frame));
        stage = "ngts.torsion.reindex";
        const AncM m2s(anc_quadruple(q, lam, t + std::numbers::pi / 2), 2);
        acc.add("ngts.torsion.reindex",
                frame_max(T1 + lower_torsion(torsion(NgtsConnection<AncM>(m2s, eng), x), g), frame));
        stage = "ngts.torsion.path_b";
        acc.add("ngts.torsion.path_b", frame_max(lower_torsion(torsion(cb, x), g) - ngts_torsion(m1, eng, x), frame));
        stage = "ngts.connection.path_equality";
        acc.add("ngts.connection.path_equality", connection_difference(c1, cb, g, frame, x));
        if constexpr (kIsS5<Q>) {
          stage = "ngts.connection.lambda_independence";
          const double l2 = 2.0 * lam;
          acc.add("ngts.connection.lambda_independence",
                  connection_difference(cb, NgtsFamilyConnection<NcQuadruple<Q>>(nc_quadruple(q, l2), t, l2, eng),
                                        g, frame, x));
        } else {
          stage = "ngts.connection.levi_civita";
          acc.add("ngts.torsion.zero", std::max(max_abs(torsion(c1, x)), max_abs(torsion(cb, x))));
          const LeviCivita<AncM> lc(m1, eng);
          acc.add("ngts.connection.levi_civita",
                  std::max(connection_difference(c1, lc, g, frame, x), connection_difference(cb, lc, g, frame, x)));
        }
        stage = "ngts.nabla_phi";
        acc.add_all(nabla_phi_formulas_residuals(nc_quadruple(q, lam), t, lam, eng, x), "ngts.nabla_phi.");
      }
    });
    return out;
  });
  Accumulator printed;
  for (const auto& pp : per_point) {
    ctx.acc.merge(pp.acc);
    printed.merge(pp.printed);
  }
  Finding f{"ngts.variant.as_printed",
            "connection with +1/6 [eta(X) d eta(Y, Z) + eta(Y) d eta(X, Z)]: same torsion, its g display holds as "
            "commonly written, but the F display and the metricity condition fail",
            {}};
  for (const auto& [k, e] : printed.entries()) f.values[k] = e.max;
  ctx.findings.push_back(std::move(f));
}

// ---------------------------------------------------------------------------
// ngts_curvature: curvature of the base, of the NGTS connection, and the
// Ricci decomposition of the latter.

inline std::vector<CheckSpec> ngts_curvature_specs(const ModelInfo& m, const SuiteParams& P) {
  SpecList s{"ngts_curvature", {}};
  const bool s5 = m.kind != ModelKind::kFlatCosymplectic;
  if (s5) {
    s.add("curv.base.ricci", tol::kEinstein, "round S^5: Ric = 4 g");
    s.add("curv.base.scalar", tol::kEinstein, "round S^5: scalar curvature 20");
    s.add("curv.base.sasakian_xi", tol::kFirstDerivative, "Sasakian: R(X, Y)xi = eta(Y)X - eta(X)Y");
  } else {
    s.add("curv.flat.zero", tol::kFlat, "flat: Levi-Civita, ANC and NGTS curvatures vanish");
  }
  s.add("curv.base.antisymmetry", tol::kCurvature, "Levi-Civita curvature: R(Z, X) = -R(X, Z)");
  s.add("curv.base.bianchi", tol::kCurvature, "Levi-Civita curvature: first Bianchi identity");
  s.add("curv.base.pair_symmetry", tol::kCurvature, "Levi-Civita curvature: pair symmetry");
  s.add("ngts.curvature.antisymmetry", tol::kCurvature, "NGTS curvature: R(Z, X) = -R(X, Z)");
  if (s5) {
    s.add("ngts.curvature.xi_display", tol::kCurvature,
          "R(Z, X)xi = 7/4 [eta(X)Z - eta(Z)X] + 3/4 [eta(X)phi1t Z - eta(Z)phi1t X] - W1t(Z, X)xi");
    s.add("ngts.curvature.full_display", tol::kCurvature,
          "closed form of the NGTS curvature in Sasaki-Einstein quantities");
  }
  if (fit_possible(P)) {
    s.add("ngts.ricci.fit_residual", tol::kRicciFit, "NGTS Ricci lies in span{g, eta x eta, W1t}: pooled residual");
    s.add("ngts.ricci.spread", tol::kSpread, "NGTS Ricci coefficients are constant across points and t");
    if (s5)
      s.add("ngts.ricci.reference_deviation", tol::kCoefficient,
            "NGTS Ricci coefficients against the reference (5/3, 16/3, 4/3)");
  }
  return s.specs;
}

struct CurvaturePoint {
  Accumulator acc;
  Accumulator printed;
  std::vector<FitSample<3>> ricci;
  std::vector<FitSample<3>> ricci_printed;
  XiFitRows xi_rows;
  XiFitRows xi_rows_printed;
};

inline void run_ngts_curvature(SuiteContext& ctx) {
  const auto& P = ctx.params;
  const double lam = ctx.lambda;
  auto per_point = ctx.map_points<CurvaturePoint>([&](const ChartPoint& p, std::string& stage) {
    CurvaturePoint out;
    Accumulator& acc = out.acc;
    const auto& x = p.coords;
    const auto& eng = ctx.eng();
    visit_base(ctx.model, p, [&](const auto& q) {
      using Q = std::decay_t<decltype(q)>;
      stage = "curv.base";
      const auto g0 = q.metric(x);
      const auto xi0 = q.xi(x);
      const auto frame0 = orthonormal_frame(g0, &xi0);
      const auto c0 = curvature(LeviCivita<Q>(q, eng), g0, x);
      const auto sym = curvature_symmetry_residuals(c0.riemann, g0);
      acc.add("curv.base.antisymmetry", sym.antisymmetry);
      acc.add("curv.base.bianchi", sym.bianchi);
      acc.add("curv.base.pair_symmetry", sym.pair_symmetry);
      if constexpr (kIsS5<Q>) {
        acc.add("curv.base.ricci", frame_max(c0.ricci - 4.0 * g0, frame0));
        acc.add("curv.base.scalar", std::abs(c0.scalar - 20.0));
        const auto eta0 = q.eta(x);
        acc.add("curv.base.sasakian_xi", curvature_xi_residual(c0.riemann, g0, xi0, frame0, [&](const V5& X, const V5& Y) {
                  return pair(eta0, Y) * X - pair(eta0, X) * Y;
                }));
      } else {
        acc.add("curv.flat.zero", max_abs(c0.riemann));
      }
      for (double t : P.t) {
        stage = "ngts.curvature";
        const NgtsFamilyConnection<NcQuadruple<Q>> cb(nc_quadruple(q, lam), t, lam, eng);
        const NgtsFamilyConnection<NcQuadruple<Q>> cp(nc_quadruple(q, lam), t, lam, eng, NgtsVariant::kAsPrinted);
        const auto rn = riemann(cb, x);
        const auto rp = riemann(cp, x);
        const Su2Local se = su2_local(Rotated<Q>(q, t), eng, x);
        acc.add("ngts.curvature.antisymmetry", curvature_symmetry_residuals(rn, se.g).antisymmetry);
        if constexpr (kIsS5<Q>) {
          const auto cr = ngts_curvature_residuals(rn, c0.riemann, se);
          acc.add("ngts.curvature.xi_display", cr.xi_display);
          acc.add("ngts.curvature.full_display", cr.full_display);
          const auto crp = ngts_curvature_residuals(rp, c0.riemann, se);
          out.printed.add("xi_display", crp.xi_display);
          out.printed.add("full_display", crp.full_display);
        } else {
          const auto ancq = anc_quadruple(q, lam, t);
          const Member<AncQuadruple<Q>> am(ancq, 1);
          acc.add("curv.flat.zero",
                  std::max(max_abs(rn), max_abs(riemann(LeviCivita<Member<AncQuadruple<Q>>>(am, eng), x))));
        }
        const std::array<Mat<double>, 3> basis{se.g, outer(se.eta, se.eta), se.omega[0]};
        out.ricci.push_back({ricci_from_riemann(rn), basis, se.frame});
        out.ricci_printed.push_back({ricci_from_riemann(rp), basis, se.frame});
        add_xi_fit_rows(out.xi_rows, rn, se);
        add_xi_fit_rows(out.xi_rows_printed, rp, se);
      }
    });
    return out;
  });

  std::vector<FitSample<3>> ricci, ricci_p;
  XiFitRows xr, xrp;
  Accumulator printed;
  for (auto& pp : per_point) {
    ctx.acc.merge(pp.acc);
    printed.merge(pp.printed);
    ricci.insert(ricci.end(), pp.ricci.begin(), pp.ricci.end());
    ricci_p.insert(ricci_p.end(), pp.ricci_printed.begin(), pp.ricci_printed.end());
    xr.rows.insert(xr.rows.end(), pp.xi_rows.rows.begin(), pp.xi_rows.rows.end());
    xrp.rows.insert(xrp.rows.end(), pp.xi_rows_printed.rows.begin(), pp.xi_rows_printed.rows.end());
  }
  if (!fit_possible(P)) {
    ctx.findings.push_back({"ngts.ricci.fit", "skipped: fewer than 20 (point, t) samples", {}});
    return;
  }
  const auto fit = fit_tensor_basis<3>(ricci);
  const auto fitp = fit_tensor_basis<3>(ricci_p);
  ctx.acc.add("ngts.ricci.fit_residual", fit.residual, ricci.size());
  ctx.acc.add("ngts.ricci.spread", fit.spread, ricci.size());
  double dev = 0.0;
  for (int k = 0; k < 3; ++k) dev = std::max(dev, std::abs(fit.coefficients[k] - kNgtsRicciReference[k]));
  if (ctx.s5()) ctx.acc.add("ngts.ricci.reference_deviation", dev, ricci.size());

  ctx.findings.push_back({"ngts.ricci.fit",
                          dev > tol::kCoefficient && ctx.s5()
                              ? "Ric = c_g g + c_eta eta x eta + c_w W1t; DEVIATES from the reference (5/3, 16/3, 4/3)"
                              : "Ric = c_g g + c_eta eta x eta + c_w W1t",
                          {{"c_g", fit.coefficients[0]},
                           {"c_eta", fit.coefficients[1]},
                           {"c_w", fit.coefficients[2]},
                           {"reference_c_g", kNgtsRicciReference[0]},
                           {"reference_c_eta", kNgtsRicciReference[1]},
                           {"reference_c_w", kNgtsRicciReference[2]},
                           {"residual", fit.residual},
                           {"spread", fit.spread}}});
  ctx.findings.push_back({"ngts.ricci.fit_as_printed",
                          "Ricci fit for the as-printed connection variant",
                          {{"c_g", fitp.coefficients[0]},
                           {"c_eta", fitp.coefficients[1]},
                           {"c_w", fitp.coefficients[2]},
                           {"residual", fitp.residual},
                           {"spread", fitp.spread}}});
  const auto [xc, xres] = solve_xi_fit(xr);
  const auto [xcp, xresp] = solve_xi_fit(xrp);
  Finding xf{"ngts.curvature.xi_fit",
             "R(Z, X)xi = k0 [eta(X)Z - eta(Z)X] + k1 [eta(X)phi1t Z - eta(Z)phi1t X] + k2 W1t(Z, X)xi; "
             "reference (7/4, 3/4, -1)",
             {{"k0", xc[0]}, {"k1", xc[1]}, {"k2", xc[2]}, {"residual", xres},
              {"as_printed_k0", xcp[0]}, {"as_printed_k1", xcp[1]}, {"as_printed_k2", xcp[2]},
              {"as_printed_residual", xresp}}};
  for (const auto& [k, e] : printed.entries()) xf.values["as_printed_" + k] = e.max;
  ctx.findings.push_back(std::move(xf));
}

// ---------------------------------------------------------------------------

struct SuiteGroup {
  const char* name;
  std::vector<CheckSpec> (*specs)(const ModelInfo&, const SuiteParams&);
  void (*run)(SuiteContext&);
};

inline const std::vector<SuiteGroup>& groups() {
  static const std::vector<SuiteGroup> g = {
      {"acm", acm_specs, run_acm},
      {"anc_identities", anc_specs, run_anc},
      {"su2_systems", su2_specs, run_su2},
      {"dhom", dhom_specs, run_dhom},
      {"ngts_metricity", ngts_metricity_specs, run_ngts_metricity},
      {"ngts_curvature", ngts_curvature_specs, run_ngts_curvature},
  };
  return g;
}

}  // namespace suites

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"acm",           "anc_identities", "su2_systems",   "dhom",
                                                 "ngts_metricity", "ngts_curvature", "full"};
  return names;
}

}  // namespace cgeo
