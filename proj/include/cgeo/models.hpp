#pragma once

// Concrete manifolds: flat R^5 with its cosymplectic SU(2) quadruple, and the
// round unit S^5 in R^6 = C^3 with its Sasaki-Einstein quadruple, expressed in
// stereographic charts. Plus the structure chain built on top of them
// (homothety to a given lambda, rotation by t, D-homothety a = 3/2), seeded
// samplers and registration-time assertions.

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "cgeo/acm.hpp"
#include "cgeo/chart.hpp"
#include "cgeo/connections.hpp"
#include "cgeo/contact.hpp"
#include "cgeo/deform.hpp"
#include "cgeo/dual.hpp"
#include "cgeo/errors.hpp"
#include "cgeo/linalg.hpp"
#include "cgeo/sampling.hpp"
#include "cgeo/tensor.hpp"

namespace cgeo {

inline constexpr int kAmbientDim = 6;

// ---------------------------------------------------------------------------
// Flat R^5 = R^4 x R, coordinates (x0, x1, x2, x3, x4), xi = d/dx4.
//   phi2: e0 -> e1 -> -e0, e2 -> e3 -> -e2   (the standard complex structure)
//   phi3: e0 -> e2 -> -e0, e3 -> e1 -> -e3
//   phi1 = phi2 phi3
// All forms are constant, so the structure is cosymplectic (lambda = 0).
class FlatR5 {
 public:
  GlobalChart chart() const { return {}; }

  template <class U>
  Mat<U> metric(const Point<U>&) const {
    return identity<U, kDim>();
  }
  template <class U>
  Vec<U> eta(const Point<U>&) const {
    Vec<U> e;
    e(4) = U(1.0);
    return e;
  }
  template <class U>
  Vec<U> xi(const Point<U>& x) const {
    return eta(x);
  }
  template <class U>
  Mat<U> omega(int i, const Point<U>&) const {
    return lift<U>(lower_endo(endo(i), identity<double, kDim>()));
  }
  template <class U>
  Mat<U> phi(const Point<U>&) const {
    return lift<U>(endo(2));
  }

  static Mat<double> endo(int i) {
    Mat<double> p2;
    p2(1, 0) = 1.0;
    p2(0, 1) = -1.0;
    p2(3, 2) = 1.0;
    p2(2, 3) = -1.0;
    Mat<double> p3;
    p3(2, 0) = 1.0;
    p3(0, 2) = -1.0;
    p3(1, 3) = 1.0;
    p3(3, 1) = -1.0;
    if (i == 2) return p2;
    if (i == 3) return p3;
    return matmul(p2, p3);
  }

 private:
  template <class U>
  static Mat<U> lift(const Mat<double>& m) {
    Mat<U> r;
    for (int k = 0; k < Mat<double>::kSize; ++k) r.c[k] = U(m.c[k]);
    return r;
  }
};

// ---------------------------------------------------------------------------
// Round S^5. Ambient coordinates u in R^6 with z_j = u_{2j} + i u_{2j+1}.
// Chart with excluded pole s e_6 (s = +1 north, -1 south):
//   X(x) = (2x / (1 + |x|^2), s (|x|^2 - 1) / (1 + |x|^2)),  x = u_{0..4} / (1 - s u_5).
// Structures are ambient tensors pulled back through the embedding Jacobian
// J = dX/dx, which is obtained by differentiating X with dual numbers:
//   g = J^T J
//   eta = J^T eta_amb,   eta_amb = sum_j (x_j dy_j - y_j dx_j)
//   xi  = g^{-1} eta     (restriction of sum_j (x_j d/dy_j - y_j d/dx_j))
//   w3  = J^T w3_amb J,  w3_amb = -sum_j dx_j ^ dy_j     (so d eta = -2 w3)
//   w1 + i(-w2) = pullback of  z1 dz2^dz3 - z2 dz1^dz3 + z3 dz1^dz2,
// i.e. the contraction of dz1^dz2^dz3 by the Euler field at r = 1.
// Phase reference: at u = e_1 (z = (1, 0, 0)) the contraction is dz2^dz3, so
// w1(d/du_2, d/du_4) = +1 there.
class RoundS5 {
 public:
  explicit RoundS5(StereoChart chart = {}) : chart_(chart) {}

  StereoChart chart() const { return chart_; }

  template <class U>
  std::array<U, kAmbientDim> embed(const Point<U>& x) const {
    U r2{};
    for (int i = 0; i < kDim; ++i) r2 = r2 + x[i] * x[i];
    const U inv = 1.0 / (1.0 + r2);
    std::array<U, kAmbientDim> u;
    for (int i = 0; i < kDim; ++i) u[i] = 2.0 * x[i] * inv;
    u[5] = chart_.pole() * (r2 - 1.0) * inv;
    return u;
  }

  static Point<double> project(const std::array<double, kAmbientDim>& u, double pole) {
    Point<double> x;
    const double d = 1.0 - pole * u[5];
    for (int i = 0; i < kDim; ++i) x[i] = u[i] / d;
    return x;
  }

  template <class U>
  struct Pullback {
    std::array<U, kAmbientDim> u;
    std::array<std::array<U, kDim>, kAmbientDim> jac;  // jac[a][i] = d u_a / d x^i
  };

  template <class U>
  Pullback<U> pullback(const Point<U>& x) const {
    using D = Dual<U, kDim>;
    Point<D> xd;
    for (int i = 0; i < kDim; ++i) {
      xd[i] = D::constant(x[i]);
      xd[i].d[i] = U(1.0);
    }
    const auto ud = embed(xd);
    Pullback<U> p;
    for (int a = 0; a < kAmbientDim; ++a) {
      p.u[a] = ud[a].val;
      for (int i = 0; i < kDim; ++i) p.jac[a][i] = ud[a].d[i];
    }
    return p;
  }

  template <class U>
  Mat<U> metric(const Point<U>& x) const {
    return metric_of(pullback(x));
  }
  template <class U>
  Vec<U> eta(const Point<U>& x) const {
    return eta_of(pullback(x));
  }
  template <class U>
  Vec<U> xi(const Point<U>& x) const {
    const auto p = pullback(x);
    return contract_slot(eta_of(p), 0, inverse(metric_of(p)));
  }
  template <class U>
  Mat<U> omega(int i, const Point<U>& x) const {
    const auto p = pullback(x);
    Mat<U> w;
    if (i == 3) {
      // -sum_j dx_j ^ dy_j
      for (int a = 0; a < kDim; ++a)
        for (int b = 0; b < kDim; ++b) {
          U acc{};
          for (int j = 0; j < 3; ++j)
            acc = acc - p.jac[2 * j][a] * p.jac[2 * j + 1][b] + p.jac[2 * j + 1][a] * p.jac[2 * j][b];
          w(a, b) = acc;
        }
      return w;
    }
    // sigma = sum over (c; a, b) in {(1; 2, 3), (2; 1, 3)-, (3; 1, 2)} of +-z_c dz_a ^ dz_b,
    // with dz_j pulled back to the complex covector jac[2j] + i jac[2j+1].
    const int terms[3][3] = {{0, 1, 2}, {1, 0, 2}, {2, 0, 1}};
    const double sign[3] = {1.0, -1.0, 1.0};
    for (int r = 0; r < kDim; ++r)
      for (int q = 0; q < kDim; ++q) {
        U re{};
        U im{};
        for (int t = 0; t < 3; ++t) {
          const int c = terms[t][0];
          const int a = terms[t][1];
          const int b = terms[t][2];
          const U ar = p.jac[2 * a][r], ai = p.jac[2 * a + 1][r];
          const U aqr = p.jac[2 * a][q], aqi = p.jac[2 * a + 1][q];
          const U br = p.jac[2 * b][r], bi = p.jac[2 * b + 1][r];
          const U bqr = p.jac[2 * b][q], bqi = p.jac[2 * b + 1][q];
          // (dz_a ^ dz_b)(e_r, e_q) = dz_a(e_r) dz_b(e_q) - dz_a(e_q) dz_b(e_r)
          const U mr = (ar * bqr - ai * bqi) - (aqr * br - aqi * bi);
          const U mi = (ar * bqi + ai * bqr) - (aqr * bi + aqi * br);
          const U zr = sign[t] * p.u[2 * c];
          const U zi = sign[t] * p.u[2 * c + 1];
          re = re + zr * mr - zi * mi;
          im = im + zr * mi + zi * mr;
        }
        w(r, q) = i == 1 ? re : -im;
      }
    return w;
  }

 private:
  template <class U>
  static Mat<U> metric_of(const Pullback<U>& p) {
    Mat<U> g;
    for (int i = 0; i < kDim; ++i)
      for (int j = i; j < kDim; ++j) {
        U acc{};
        for (int a = 0; a < kAmbientDim; ++a) acc = acc + p.jac[a][i] * p.jac[a][j];
        g(i, j) = acc;
        g(j, i) = acc;
      }
    return g;
  }

  // sum_j (x_j dy_j - y_j dx_j)
  template <class U>
  static Vec<U> eta_of(const Pullback<U>& p) {
    Vec<U> e;
    for (int i = 0; i < kDim; ++i) {
      U acc{};
      for (int j = 0; j < 3; ++j)
        acc = acc + p.u[2 * j] * p.jac[2 * j + 1][i] - p.u[2 * j + 1] * p.jac[2 * j][i];
      e(i) = acc;
    }
    return e;
  }

  StereoChart chart_;
};

// ---------------------------------------------------------------------------
// Structure chain. The base quadruple (Sasaki-Einstein on S^5, cosymplectic on
// R^5) is made nearly cosymplectic with parameter lambda by a homothety of
// factor 1/lambda (factor 1 when lambda = 0), rotated by t, and deformed by
// a = 3/2 into an almost-nearly cosymplectic quadruple.

inline double nc_homothety_factor(double lambda) { return lambda > 0.0 ? 1.0 / lambda : 1.0; }

template <class Q>
using NcQuadruple = Homothety<Q>;
template <class Q>
using RotatedNc = Rotated<Homothety<Q>>;
template <class Q>
using AncQuadruple = DHomothety<RotatedNc<Q>>;

inline constexpr double kAncConstant = 1.5;

template <class Q>
NcQuadruple<Q> nc_quadruple(const Q& base, double lambda) {
  return NcQuadruple<Q>(base, nc_homothety_factor(lambda));
}

template <class Q>
RotatedNc<Q> rotated_nc(const Q& base, double lambda, double t) {
  return RotatedNc<Q>(nc_quadruple(base, lambda), t);
}

template <class Q>
AncQuadruple<Q> anc_quadruple(const Q& base, double lambda, double t, double a = kAncConstant) {
  return AncQuadruple<Q>(rotated_nc(base, lambda, t), a);
}

// ---------------------------------------------------------------------------
// Sampling. S^5: normalized 6-dimensional Gaussian, then the chart whose
// excluded pole lies in the other hemisphere (u_5 <= 0 -> north chart), so
// every sample has |x| <= 1, far inside the validity region.

inline ChartPoint sample_s5(std::uint64_t seed, std::uint64_t index) {
  CounterRng rng(seed, index);
  std::array<double, kAmbientDim> u{};
  double n2 = 0.0;
  while (n2 < 1e-12) {
    n2 = 0.0;
    for (auto& v : u) {
      v = rng.normal();
      n2 += v * v;
    }
  }
  const double n = std::sqrt(n2);
  for (auto& v : u) v /= n;
  const ChartId id = u[5] <= 0.0 ? ChartId::kNorth : ChartId::kSouth;
  const double pole = id == ChartId::kNorth ? 1.0 : -1.0;
  return {id, RoundS5::project(u, pole)};
}

inline constexpr double kFlatSampleBox = 2.0;

inline ChartPoint sample_flat(std::uint64_t seed, std::uint64_t index) {
  CounterRng rng(seed, index);
  ChartPoint p;
  p.chart = ChartId::kGlobal;
  for (auto& v : p.coords) v = kFlatSampleBox * (2.0 * rng.uniform() - 1.0);
  return p;
}

// ---------------------------------------------------------------------------
// Registry.

enum class ModelKind { kFlatCosymplectic, kS5SasakiEinstein, kS5Anc };

struct ModelInfo {
  std::string name;
  ModelKind kind = ModelKind::kFlatCosymplectic;
  int dim = kDim;
  double declared_lambda = 0.0;
  std::vector<ChartId> charts;
  std::string description;
};

inline const std::vector<ModelInfo>& model_catalog() {
  static const std::vector<ModelInfo> models = {
      {"flat_cosymplectic", ModelKind::kFlatCosymplectic, kDim, 0.0, {ChartId::kGlobal},
       "R^5 = R^4 x R, Euclidean metric, cosymplectic SU(2) quadruple"},
      {"s5_anc", ModelKind::kS5Anc, kDim, 1.0, {ChartId::kNorth, ChartId::kSouth},
       "unit S^5, circle-family nearly cosymplectic structures deformed by a = 3/2"},
      {"s5_se", ModelKind::kS5SasakiEinstein, kDim, 1.0, {ChartId::kNorth, ChartId::kSouth},
       "unit S^5, Sasaki-Einstein SU(2) quadruple"},
  };
  return models;
}

inline const ModelInfo& find_model(const std::string& name) {
  for (const auto& m : model_catalog())
    if (m.name == name) return m;
  throw ParameterError("unknown model '" + name + "'");
}

inline ChartPoint sample_point(const ModelInfo& m, std::uint64_t seed, std::uint64_t index) {
  return m.kind == ModelKind::kFlatCosymplectic ? sample_flat(seed, index) : sample_s5(seed, index);
}

inline std::vector<ChartPoint> sample_points(const ModelInfo& m, std::uint64_t seed, std::size_t n) {
  std::vector<ChartPoint> pts;
  pts.reserve(n);
  for (std::size_t i = 0; i < n; ++i) pts.push_back(sample_point(m, seed, i));
  return pts;
}

// Calls f(base_quadruple, point) with the base quadruple expressed in the
// point's chart.
template <class F>
decltype(auto) with_s5_chart(const ChartPoint& p, F&& f) {
  if (p.chart == ChartId::kGlobal) throw DomainError("S^5 point given in the global chart");
  const RoundS5 s5(StereoChart{p.chart});
  require_in_chart(s5.chart(), p);
  return f(s5);
}

// ---------------------------------------------------------------------------
// Registration assertions.

inline constexpr std::uint64_t kRegistrationSeed = 0x5EED2024ULL;
inline constexpr std::size_t kRegistrationSamples = 100;

struct RegistrationLimits {
  double se_system = 1e-7;
  double ricci = 1e-5;
  double scalar = 1e-5;
  double lambda = 1e-6;
  double anc_class = 1e-7;
  double cosymplectic = 1e-12;
};

namespace detail {

inline void require_below(const std::string& model, const std::string& what, double value, double limit) {
  if (!(value <= limit))
    throw ModelBuildError("model '" + model + "': registration residual '" + what + "' = " +
                          std::to_string(value) + " exceeds " + std::to_string(limit));
}

}  // namespace detail

struct RegistrationSummary {
  std::string model;
  std::size_t samples = 0;
  ResidualMap max_residuals;
};

inline void note_max(ResidualMap& m, const std::string& k, double v) {
  auto it = m.find(k);
  if (it == m.end())
    m[k] = v;
  else
    it->second = std::max(it->second, v);
}

inline RegistrationSummary build_flat_cosymplectic(std::size_t n = kRegistrationSamples,
                                                   std::uint64_t seed = kRegistrationSeed,
                                                   const RegistrationLimits& lim = {}) {
  RegistrationSummary sum{"flat_cosymplectic", n, {}};
  const auto& info = find_model("flat_cosymplectic");
  const FlatR5 q;
  const Member<FlatR5> acm(q, 2);
  const DerivativeEngine eng;
  for (const auto& p : sample_points(info, seed, n)) {
    const AcmLocal L = acm_local(acm, eng, p.coords);
    note_max(sum.max_residuals, "cosymplectic", class_residuals(L).at("cosymplectic"));
    note_max(sum.max_residuals, "h", max_abs(L.h));
  }
  detail::require_below(sum.model, "cosymplectic", sum.max_residuals["cosymplectic"], lim.cosymplectic);
  detail::require_below(sum.model, "h", sum.max_residuals["h"], lim.cosymplectic);
  return sum;
}

inline RegistrationSummary build_s5_sasaki_einstein(std::size_t n = kRegistrationSamples,
                                                    std::uint64_t seed = kRegistrationSeed,
                                                    const RegistrationLimits& lim = {}) {
  RegistrationSummary sum{"s5_se", n, {}};
  const auto& info = find_model("s5_se");
  const DerivativeEngine eng;
  std::vector<HSpectrum> spectra;
  double killing = 0.0;
  for (const auto& p : sample_points(info, seed, n)) {
    with_s5_chart(p, [&](const RoundS5& q) {
      const Su2Local L = su2_local(q, eng, p.coords);
      note_max(sum.max_residuals, "sasaki_einstein", su2_system_residuals(L, 1.0).at("sasaki_einstein"));
      const LeviCivita<RoundS5> lc(q, eng);
      const auto c = curvature(lc, L.g, p.coords);
      note_max(sum.max_residuals, "ricci_einstein", frame_max(c.ricci - 4.0 * L.g, L.frame));
      note_max(sum.max_residuals, "scalar", std::abs(c.scalar - 20.0));
      const Member<RoundS5> se(q, 3);
      const AcmLocal A = acm_local(se, eng, p.coords);
      spectra.push_back(h_spectrum(A));
      const auto k = killing_residual(q, [&q](const auto& y) { return q.xi(y); }, eng, p.coords);
      killing = std::max(killing, k.symmetric);
      return 0;
    });
  }
  const auto est = estimate_lambda(spectra, killing);
  sum.max_residuals["lambda"] = est.lambda_type ? std::abs(est.lambda - 1.0) : 1.0;
  detail::require_below(sum.model, "sasaki_einstein", sum.max_residuals["sasaki_einstein"], lim.se_system);
  detail::require_below(sum.model, "ricci_einstein", sum.max_residuals["ricci_einstein"], lim.ricci);
  detail::require_below(sum.model, "scalar", sum.max_residuals["scalar"], lim.scalar);
  detail::require_below(sum.model, "lambda", sum.max_residuals["lambda"], lim.lambda);
  return sum;
}

// ANC class residual of the a-deformed circle-family member phi2t, for each t.
inline RegistrationSummary build_anc_s5(const std::vector<double>& ts, double a = kAncConstant,
                                        std::size_t n = kRegistrationSamples,
                                        std::uint64_t seed = kRegistrationSeed,
                                        const RegistrationLimits& lim = {}) {
  RegistrationSummary sum{"s5_anc", n, {}};
  const auto& info = find_model("s5_anc");
  const DerivativeEngine eng;
  for (const auto& p : sample_points(info, seed, n)) {
    with_s5_chart(p, [&](const RoundS5& q) {
      for (double t : ts) {
        const Member<AncQuadruple<RoundS5>> anc(anc_quadruple(q, 1.0, t, a), 2);
        note_max(sum.max_residuals, "anc", class_residuals(acm_local(anc, eng, p.coords)).at("anc"));
      }
      return 0;
    });
  }
  detail::require_below(sum.model, "anc", sum.max_residuals["anc"], lim.anc_class);
  return sum;
}

inline RegistrationSummary register_model(const std::string& name, const std::vector<double>& ts = {0.0},
                                          std::size_t n = kRegistrationSamples) {
  const auto& m = find_model(name);
  switch (m.kind) {
    case ModelKind::kFlatCosymplectic: return build_flat_cosymplectic(n);
    case ModelKind::kS5SasakiEinstein: return build_s5_sasaki_einstein(n);
    case ModelKind::kS5Anc: return build_anc_s5(ts, kAncConstant, n);
  }
  throw InternalConsistencyError("unhandled model kind");
}

// Chart-independence spot check: the same ambient point seen through the
// north and the south chart gives the same scalar invariants (SE system,
// Ricci and ANC class residuals are frame-measured). Returns the largest
// disagreement.
inline double s5_chart_independence(std::uint64_t seed, std::size_t n, double t = 0.0) {
  const DerivativeEngine eng;
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    // points near the equator u_5 ~ 0 lie well inside both charts
    CounterRng rng(seed, i);
    std::array<double, kAmbientDim> u{};
    double n2 = 0.0;
    for (int a = 0; a < kAmbientDim - 1; ++a) {
      u[a] = rng.normal();
      n2 += u[a] * u[a];
    }
    u[5] = 0.5 * (2.0 * rng.uniform() - 1.0) * std::sqrt(n2);
    n2 += u[5] * u[5];
    for (auto& v : u) v /= std::sqrt(n2);
    std::array<double, 4> vals[2];
    const ChartId ids[2] = {ChartId::kNorth, ChartId::kSouth};
    for (int c = 0; c < 2; ++c) {
      const RoundS5 q(StereoChart{ids[c]});
      const auto x = RoundS5::project(u, q.chart().pole());
      const Su2Local L = su2_local(q, eng, x);
      const auto c5 = curvature(LeviCivita<RoundS5>(q, eng), L.g, x);
      const Member<AncQuadruple<RoundS5>> anc(anc_quadruple(q, 1.0, t), 2);
      const AcmLocal A = acm_local(anc, eng, x);
      vals[c] = {su2_system_residuals(L, 1.0).at("sasaki_einstein"), c5.scalar,
                 trace_h_squared(A), class_residuals(A).at("anc")};
    }
    for (int k = 0; k < 4; ++k) worst = std::max(worst, std::abs(vals[0][k] - vals[1][k]));
  }
  return worst;
}

}  // namespace cgeo
