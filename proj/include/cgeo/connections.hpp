#pragma once

// Affine connections given by coefficient fields Gamma^k_ij(x): Levi-Civita
// construction, covariant derivatives, torsion and curvature.
//
// Curvature convention: R(Z, X)Y = nabla_Z nabla_X Y - nabla_X nabla_Z Y - nabla_[Z,X] Y,
// Ric(X, Y) = trace(Z -> R(Z, X)Y). With these the unit round sphere S^n has
// Ric = (n - 1) g. The same first-slot trace is used for connections with
// torsion; no symmetrisation is applied.

#include <array>
#include <utility>

#include "cgeo/acm.hpp"
#include "cgeo/derivative.hpp"
#include "cgeo/linalg.hpp"
#include "cgeo/tensor.hpp"

namespace cgeo {

template <class C>
concept Connection = requires(const C& c, const Point<double>& x) {
  { c.gamma(x) } -> std::same_as<Tensor3<double>>;
  { c.engine() } -> std::convertible_to<DerivativeEngine>;
  { c.chart() };
};

enum class ConnectionKind { kLeviCivita, kNgts, kCustom };

template <MetricField M>
class LeviCivita {
 public:
  LeviCivita(M source, DerivativeEngine eng = {}) : source_(std::move(source)), eng_(eng) {}

  static constexpr ConnectionKind kind() { return ConnectionKind::kLeviCivita; }
  auto chart() const { return source_.chart(); }
  const DerivativeEngine& engine() const { return eng_; }
  const M& metric_source() const { return source_; }

  // Gamma^k_ij = 1/2 g^kl (d_i g_jl + d_j g_il - d_l g_ij)
  template <class S>
  Tensor3<S> gamma(const Point<S>& x) const {
    const auto j = jet1(eng_, [this](const auto& y) { return source_.metric(y); }, x);
    const Mat<S> gi = inverse(j.value);
    Tensor3<S> first;  // Gamma_{l ij}
    for (int l = 0; l < kDim; ++l)
      for (int i = 0; i < kDim; ++i)
        for (int k = 0; k < kDim; ++k)
          first(l, i, k) = (j.grad(i, k, l) + j.grad(k, i, l) - j.grad(l, i, k)) * 0.5;
    Tensor3<S> out;
    for (int k = 0; k < kDim; ++k)
      for (int i = 0; i < kDim; ++i)
        for (int jj = 0; jj < kDim; ++jj) {
          S acc{};
          for (int l = 0; l < kDim; ++l) acc = acc + gi(k, l) * first(l, i, jj);
          out(k, i, jj) = acc;
        }
    return out;
  }

 private:
  M source_;
  DerivativeEngine eng_;
};

// Connection with caller-supplied coefficients; `fn` is generic in the scalar.
template <class Chart, class Fn>
class CustomConnection {
 public:
  CustomConnection(Chart chart, Fn fn, DerivativeEngine eng = {})
      : chart_(chart), fn_(std::move(fn)), eng_(eng) {}

  static constexpr ConnectionKind kind() { return ConnectionKind::kCustom; }
  const Chart& chart() const { return chart_; }
  const DerivativeEngine& engine() const { return eng_; }
  template <class S>
  Tensor3<S> gamma(const Point<S>& x) const {
    return fn_(x);
  }

 private:
  Chart chart_;
  Fn fn_;
  DerivativeEngine eng_;
};

// T^k_ij = Gamma^k_ij - Gamma^k_ji, i.e. T(X, Y) = nabla_X Y - nabla_Y X - [X, Y].
template <class S>
Tensor3<S> torsion_from_gamma(const Tensor3<S>& g) {
  Tensor3<S> t;
  for (int k = 0; k < kDim; ++k)
    for (int i = 0; i < kDim; ++i)
      for (int j = 0; j < kDim; ++j) t(k, i, j) = g(k, i, j) - g(k, j, i);
  return t;
}

template <Connection C, class S>
Tensor3<S> torsion(const C& conn, const Point<S>& x) {
  return torsion_from_gamma(conn.gamma(x));
}

// T(X, Y, Z) = g(T(X, Y), Z) as a (0,3) array.
template <class S>
Tensor3<S> lower_torsion(const Tensor3<S>& t, const Mat<S>& g) {
  Tensor3<S> r;
  for (int i = 0; i < kDim; ++i)
    for (int j = 0; j < kDim; ++j)
      for (int l = 0; l < kDim; ++l) {
        S acc{};
        for (int k = 0; k < kDim; ++k) acc = acc + t(k, i, j) * g(k, l);
        r(i, j, l) = acc;
      }
  return r;
}

// Deviation of g(T(X, Y), Z) from total antisymmetry, in a g-orthonormal frame.
template <Connection C>
double totally_skew_residual(const C& conn, const Mat<double>& g, const Point<double>& x) {
  const auto tl = lower_torsion(torsion(conn, x), g);
  return antisymmetry_residual<kDim, 3>(to_frame(tl, orthonormal_frame(g)));
}

// Covariant derivative of a tensor field. `upper[s]` marks slot s as
// contravariant. The result carries the differentiation index first:
// (nabla T)(i, j1..jR) = (nabla_{e_i} T)(j1..jR).
template <Connection C, class F, class S, std::size_t R>
auto covariant_derivative(const C& conn, const F& field, const std::array<bool, R>& upper,
                          const Point<S>& x) {
  using Out = field_result_t<F, S, kDim>;
  static_assert(Out::kRank == static_cast<int>(R), "variance pattern must match tensor rank");
  constexpr int M = Out::kSize;
  const auto j = jet1(conn.engine(), field, x);
  const Tensor3<S> G = conn.gamma(x);
  auto out = j.grad;
  for (int i = 0; i < kDim; ++i)
    for (int f = 0; f < M; ++f) {
      const auto idx = unflatten<kDim, static_cast<int>(R)>(f);
      S acc = out.c[i * M + f];
      for (int s = 0; s < static_cast<int>(R); ++s) {
        auto k = idx;
        for (int m = 0; m < kDim; ++m) {
          k[s] = m;
          const S& tv = j.value.c[flatten<kDim, static_cast<int>(R)>(k)];
          if (upper[s])
            acc = acc + G(idx[s], i, m) * tv;
          else
            acc = acc - G(m, i, idx[s]) * tv;
        }
      }
      out.c[i * M + f] = acc;
    }
  return out;
}

inline constexpr std::array<bool, 1> kVector{true};
inline constexpr std::array<bool, 1> kCovector{false};
inline constexpr std::array<bool, 2> kEndomorphism{true, false};
inline constexpr std::array<bool, 2> kBilinear{false, false};

struct CurvatureAtPoint {
  Tensor4<double> riemann;  // R^a_bcd
  Mat<double> ricci;        // Ric(X, Y) = Ric(x_index, y_index)
  double scalar = 0.0;
};

// R^a_bcd = d_c Gamma^a_db - d_d Gamma^a_cb + Gamma^a_ce Gamma^e_db - Gamma^a_de Gamma^e_cb
template <Connection C, class S>
Tensor4<S> riemann(const C& conn, const Point<S>& x) {
  const auto j = jet1(conn.engine(), [&conn](const auto& y) { return conn.gamma(y); }, x);
  const auto& G = j.value;
  Tensor4<S> r;
  for (int a = 0; a < kDim; ++a)
    for (int b = 0; b < kDim; ++b)
      for (int c = 0; c < kDim; ++c)
        for (int d = 0; d < kDim; ++d) {
          S acc = j.grad(c, a, d, b) - j.grad(d, a, c, b);
          for (int e = 0; e < kDim; ++e) acc = acc + G(a, c, e) * G(e, d, b) - G(a, d, e) * G(e, c, b);
          r(a, b, c, d) = acc;
        }
  return r;
}

// Ric(X, Y) = sum_c R^c_{Y c X}
template <class S>
Mat<S> ricci_from_riemann(const Tensor4<S>& r) {
  Mat<S> ric;
  for (int xi = 0; xi < kDim; ++xi)
    for (int yi = 0; yi < kDim; ++yi) {
      S acc{};
      for (int c = 0; c < kDim; ++c) acc = acc + r(c, yi, c, xi);
      ric(xi, yi) = acc;
    }
  return ric;
}

template <Connection C>
CurvatureAtPoint curvature(const C& conn, const Mat<double>& g, const Point<double>& x) {
  CurvatureAtPoint out;
  out.riemann = riemann(conn, x);
  out.ricci = ricci_from_riemann(out.riemann);
  const auto gi = inverse(g);
  for (int i = 0; i < kDim; ++i)
    for (int j = 0; j < kDim; ++j) out.scalar += gi(i, j) * out.ricci(i, j);
  return out;
}

// R(Z, X)Y as a vector.
template <class S>
Vec<S> apply_curvature(const Tensor4<S>& r, const Vec<S>& z, const Vec<S>& xv, const Vec<S>& y) {
  Vec<S> out;
  for (int a = 0; a < kDim; ++a) {
    S acc{};
    for (int b = 0; b < kDim; ++b)
      for (int c = 0; c < kDim; ++c)
        for (int d = 0; d < kDim; ++d) acc = acc + r(a, b, c, d) * y(b) * z(c) * xv(d);
    out(a) = acc;
  }
  return out;
}

// R(X, Y, Z, W) = g(R(X, Y)Z, W), stored as (x, y, z, w).
inline Tensor4<double> lower_riemann(const Tensor4<double>& r, const Mat<double>& g) {
  Tensor4<double> out;
  for (int c = 0; c < kDim; ++c)
    for (int d = 0; d < kDim; ++d)
      for (int b = 0; b < kDim; ++b)
        for (int e = 0; e < kDim; ++e) {
          double acc = 0.0;
          for (int a = 0; a < kDim; ++a) acc += r(a, b, c, d) * g(a, e);
          out(c, d, b, e) = acc;
        }
  return out;
}

// Residuals of the algebraic curvature symmetries, in an orthonormal frame:
// antisymmetry in (Z, X), the first Bianchi identity (torsion-free case) and
// pair symmetry (Levi-Civita case).
struct CurvatureSymmetryResiduals {
  double antisymmetry = 0.0;
  double bianchi = 0.0;
  double pair_symmetry = 0.0;
};

inline CurvatureSymmetryResiduals curvature_symmetry_residuals(const Tensor4<double>& r,
                                                               const Mat<double>& g) {
  const auto fr = to_frame(lower_riemann(r, g), orthonormal_frame(g));  // (z, x, y, w)
  CurvatureSymmetryResiduals out;
  for (int a = 0; a < kDim; ++a)
    for (int b = 0; b < kDim; ++b)
      for (int c = 0; c < kDim; ++c)
        for (int d = 0; d < kDim; ++d) {
          out.antisymmetry = std::max(out.antisymmetry, std::abs(fr(a, b, c, d) + fr(b, a, c, d)));
          out.bianchi =
              std::max(out.bianchi, std::abs(fr(a, b, c, d) + fr(b, c, a, d) + fr(c, a, b, d)));
          out.pair_symmetry = std::max(out.pair_symmetry, std::abs(fr(a, b, c, d) - fr(c, d, a, b)));
        }
  return out;
}

struct KillingResiduals {
  double symmetric = 0.0;   // max |(nabla_X eta)Y + (nabla_Y eta)X|
  double half_deta = 0.0;   // max |(nabla_X eta)Y - 1/2 d eta(X, Y)|
};

// Killing test for the vector field `xi` of metric `metric_src`, via
// eta = g(xi, .) and the Levi-Civita connection of g.
template <MetricField M, class XiField>
KillingResiduals killing_residual(const M& metric_src, const XiField& xi,
                                  const DerivativeEngine& eng, const Point<double>& x) {
  const LeviCivita<M> lc(metric_src, eng);
  auto eta = [&](const auto& y) { return contract_slot(xi(y), 0, metric_src.metric(y)); };
  const auto ne = covariant_derivative(lc, eta, kCovector, x);
  const auto de = exterior_derivative(eng, eta, x);
  const auto frame = orthonormal_frame(metric_src.metric(x));
  Mat<double> sym;
  Mat<double> half;
  for (int i = 0; i < kDim; ++i)
    for (int j = 0; j < kDim; ++j) {
      sym(i, j) = ne(i, j) + ne(j, i);
      half(i, j) = ne(i, j) - 0.5 * de(i, j);
    }
  return {frame_max(sym, frame), frame_max(half, frame)};
}

}  // namespace cgeo
