#pragma once

// Almost contact metric structures (phi, xi, eta, g) as generic fields, and
// their algebraic compatibility residuals.

#include <map>
#include <string>

#include "cgeo/chart.hpp"
#include "cgeo/linalg.hpp"
#include "cgeo/tensor.hpp"

namespace cgeo {

template <class A>
concept MetricField = requires(const A& s, const Point<double>& x) {
  { s.metric(x) } -> std::same_as<Mat<double>>;
  { s.chart() };
};

template <class A>
concept AcmStructure = MetricField<A> && requires(const A& s, const Point<double>& x) {
  { s.phi(x) } -> std::same_as<Mat<double>>;
  { s.xi(x) } -> std::same_as<Vec<double>>;
  { s.eta(x) } -> std::same_as<Vec<double>>;
};

// SU(2) quadruple (eta, w1, w2, w3) together with its metric and Reeb field;
// `omega(i, x)` takes i in {1, 2, 3}.
template <class Q>
concept Su2Quadruple = MetricField<Q> && requires(const Q& q, const Point<double>& x) {
  { q.eta(x) } -> std::same_as<Vec<double>>;
  { q.xi(x) } -> std::same_as<Vec<double>>;
  { q.omega(1, x) } -> std::same_as<Mat<double>>;
};

// F_ij = phi^k_i g_kj, without the antisymmetry contract check.
template <class S, int N>
Mat<S, N> lower_endo(const Mat<S, N>& a, const Mat<S, N>& g) {
  Mat<S, N> f;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      S acc{};
      for (int k = 0; k < N; ++k) acc = acc + a(k, i) * g(k, j);
      f(i, j) = acc;
    }
  return f;
}

// Fundamental 2-form F(X, Y) = g(phi X, Y).
template <AcmStructure A, class S>
Mat<S> fundamental_form(const A& s, const Point<S>& x) {
  return lower_endo(s.phi(x), s.metric(x));
}

// Endomorphism phi_i of an SU(2) quadruple: w_i(X, Y) = g(phi_i X, Y).
template <Su2Quadruple Q, class S>
Mat<S> su2_endo(const Q& q, int i, const Point<S>& x) {
  return endo_from_two_form(q.omega(i, x), inverse(q.metric(x)));
}

// Residuals of phi^2 = -id + eta(x)xi, g(phi X, phi Y) = g(X, Y) - eta(X)eta(Y),
// phi xi = 0, eta o phi = 0, eta(xi) = 1 and eta = g(xi, .), measured in a
// g-orthonormal frame.
template <AcmStructure A>
std::map<std::string, double> acm_compatibility_residuals(const A& s, const ChartPoint& p) {
  require_in_chart(s.chart(), p);
  const auto& x = p.coords;
  const auto phi = s.phi(x);
  const auto xi = s.xi(x);
  const auto eta = s.eta(x);
  const auto g = s.metric(x);
  const auto frame = orthonormal_frame(g);
  const auto frame_inv = inverse(frame);

  auto endo_in_frame = [&](const Mat<double>& m) { return matmul(frame_inv, matmul(m, frame)); };
  auto vec_in_frame = [&](const Vec<double>& v) { return apply(frame_inv, v); };

  std::map<std::string, double> r;
  r["phi_squared"] =
      max_abs(endo_in_frame(matmul(phi, phi) + identity<double, kDim>() - outer(xi, eta)));
  const Mat<double> pg = matmul(transpose(phi), matmul(g, phi));
  r["metric_compatibility"] = frame_max(pg - g + outer(eta, eta), frame);
  r["phi_xi"] = max_abs(vec_in_frame(apply(phi, xi)));
  Vec<double> eta_phi;
  for (int j = 0; j < kDim; ++j)
    for (int k = 0; k < kDim; ++k) eta_phi(j) += eta(k) * phi(k, j);
  r["eta_phi"] = frame_max(eta_phi, frame);
  r["eta_xi"] = std::abs(pair(eta, xi) - 1.0);
  r["eta_dual"] = frame_max(eta - contract_slot(xi, 0, g), frame);
  return r;
}

// F(xi, .) = 0 and rank F = dim - 1 (singular-value rank).
template <AcmStructure A>
std::map<std::string, double> fundamental_form_residuals(const A& s, const ChartPoint& p) {
  require_in_chart(s.chart(), p);
  const auto& x = p.coords;
  const auto f = fundamental_form(s, x);
  const auto frame = orthonormal_frame(s.metric(x));
  const auto xi = s.xi(x);
  Vec<double> fx;
  for (int j = 0; j < kDim; ++j)
    for (int i = 0; i < kDim; ++i) fx(j) += xi(i) * f(i, j);
  std::map<std::string, double> r;
  r["F_xi"] = frame_max(fx, frame);
  r["F_rank_defect"] = std::abs(numerical_rank(to_frame(f, frame)) - (kDim - 1));
  return r;
}

}  // namespace cgeo
