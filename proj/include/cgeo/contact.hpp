#pragma once

// The h-tensor hX = nabla_X xi, structure-class residuals (cosymplectic,
// Sasakian, nearly cosymplectic, almost-nearly cosymplectic), the relations
// these classes imply, and the exterior differential systems of SU(2)
// quadruples in dimension five.
//
// Every residual is the largest frame component of LHS - RHS, with the
// identity evaluated on all basis tuples of a g-orthonormal frame whose first
// vector is xi.

#include <Eigen/Dense>
#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "cgeo/acm.hpp"
#include "cgeo/connections.hpp"
#include "cgeo/derivative.hpp"
#include "cgeo/linalg.hpp"
#include "cgeo/tensor.hpp"

namespace cgeo {

using ResidualMap = std::map<std::string, double>;

// hX = nabla_X xi for the Levi-Civita connection of the structure's metric,
// as a field: h(k, i) = h^k_i.
template <AcmStructure A>
class HField {
 public:
  HField(A s, DerivativeEngine eng = {}) : s_(std::move(s)), eng_(eng) {}

  template <class U>
  Mat<U> operator()(const Point<U>& x) const {
    const LeviCivita<A> lc(s_, eng_);
    const Tensor3<U> G = lc.gamma(x);
    const auto j = jet1(eng_, [this](const auto& y) { return s_.xi(y); }, x);
    Mat<U> h;
    for (int k = 0; k < kDim; ++k)
      for (int i = 0; i < kDim; ++i) {
        U acc = j.grad(i, k);
        for (int m = 0; m < kDim; ++m) acc = acc + G(k, i, m) * j.value(m);
        h(k, i) = acc;
      }
    return h;
  }

 private:
  A s_;
  DerivativeEngine eng_;
};

// First-order data of an ACM structure at one point.
struct AcmLocal {
  Mat<double> g, g_inv, phi, F, deta, h, frame;
  Vec<double> xi, eta;
  Tensor3<double> dF;
  Tensor3<double> nabla_phi;  // g((nabla_{e_i} phi) e_j, e_l)

  Vec<double> phi_of(const Vec<double>& v) const { return apply(phi, v); }
  Vec<double> h_of(const Vec<double>& v) const { return apply(h, v); }
  double gg(const Vec<double>& u, const Vec<double>& v) const { return bilinear(g, u, v); }
  double et(const Vec<double>& v) const { return pair(eta, v); }
  double de(const Vec<double>& u, const Vec<double>& v) const { return bilinear(deta, u, v); }
  double df(const Vec<double>& u, const Vec<double>& v, const Vec<double>& w) const {
    return eval3(dF, u, v, w);
  }
  double nphi(const Vec<double>& u, const Vec<double>& v, const Vec<double>& w) const {
    return eval3(nabla_phi, u, v, w);
  }
};

template <AcmStructure A>
AcmLocal acm_local(const A& s, const DerivativeEngine& eng, const Point<double>& x) {
  const LeviCivita<A> lc(s, eng);
  AcmLocal L;
  L.g = s.metric(x);
  L.g_inv = inverse(L.g);
  L.phi = s.phi(x);
  L.xi = s.xi(x);
  L.eta = s.eta(x);
  L.F = lower_endo(L.phi, L.g);
  L.frame = orthonormal_frame(L.g, &L.xi);

  const auto np = covariant_derivative(lc, [&s](const auto& y) { return s.phi(y); }, kEndomorphism, x);
  for (int i = 0; i < kDim; ++i)
    for (int j = 0; j < kDim; ++j)
      for (int l = 0; l < kDim; ++l) {
        double acc = 0.0;
        for (int k = 0; k < kDim; ++k) acc += np(i, k, j) * L.g(k, l);
        L.nabla_phi(i, j, l) = acc;
      }
  const auto nx = covariant_derivative(lc, [&s](const auto& y) { return s.xi(y); }, kVector, x);
  for (int k = 0; k < kDim; ++k)
    for (int i = 0; i < kDim; ++i) L.h(k, i) = nx(i, k);
  L.deta = exterior_derivative(eng, [&s](const auto& y) { return s.eta(y); }, x);
  L.dF = exterior_derivative(eng, [&s](const auto& y) { return fundamental_form(s, y); }, x);
  return L;
}

// g((nabla_{e_i} h) e_j, e_l) for the Levi-Civita connection.
template <AcmStructure A>
Tensor3<double> nabla_h_lowered(const A& s, const DerivativeEngine& eng, const Point<double>& x) {
  const LeviCivita<A> lc(s, eng);
  const auto nh = covariant_derivative(lc, HField<A>(s, eng), kEndomorphism, x);
  const auto g = s.metric(x);
  Tensor3<double> out;
  for (int i = 0; i < kDim; ++i)
    for (int j = 0; j < kDim; ++j)
      for (int l = 0; l < kDim; ++l) {
        double acc = 0.0;
        for (int k = 0; k < kDim; ++k) acc += nh(i, k, j) * g(k, l);
        out(i, j, l) = acc;
      }
  return out;
}

using V5 = Vec<double>;

// Defining identities of the structure classes, each as LHS - RHS of
// g((nabla_X phi)Y, Z) = ...
inline ResidualMap class_residuals(const AcmLocal& L) {
  ResidualMap r;
  r["cosymplectic"] = frame_max(L.nabla_phi, L.frame);
  r["sasakian"] = frame_max(tabulate3([&](const V5& X, const V5& Y, const V5& Z) {
                              return L.nphi(X, Y, Z) - (L.gg(X, Y) * L.et(Z) - L.et(Y) * L.gg(X, Z));
                            }),
                            L.frame);
  r["nearly_cosymplectic"] = frame_max(L.nabla_phi - (1.0 / 3.0) * L.dF, L.frame);
  r["anc"] = frame_max(tabulate3([&](const V5& X, const V5& Y, const V5& Z) {
                         const double rhs = L.df(X, Y, Z) / 3.0 +
                                            L.et(X) * L.de(Y, L.phi_of(Z)) / 3.0 -
                                            L.et(Y) * L.de(Z, L.phi_of(X)) / 6.0 -
                                            L.et(Z) * L.de(L.phi_of(X), Y) / 6.0;
                         return L.nphi(X, Y, Z) - rhs;
                       }),
                       L.frame);
  return r;
}

// Relations between d eta and dF valid on ANC manifolds. In the last one the
// term eta(Y)(.)(Z, X) is read as eta(Y) d eta(Z, X).
inline ResidualMap ax_relations_residuals(const AcmLocal& L) {
  const V5& xi = L.xi;
  auto m2 = [&](auto f) { return frame_max(tabulate2(f), L.frame); };
  ResidualMap r;
  r["ax.deta_dF_phi_second"] =
      m2([&](const V5& X, const V5& Z) { return L.de(X, Z) - L.df(X, L.phi_of(Z), xi); });
  r["ax.deta_dF_phi_first"] =
      m2([&](const V5& X, const V5& Z) { return L.de(X, Z) - L.df(L.phi_of(X), Z, xi); });
  Vec<double> dx;
  for (int i = 0; i < kDim; ++i) dx(i) = L.de(basis_vector(i), xi);
  r["ax.deta_xi"] = frame_max(dx, L.frame);
  r["ax.deta_phi_symmetric"] =
      m2([&](const V5& X, const V5& Z) { return L.de(L.phi_of(X), Z) - L.de(X, L.phi_of(Z)); });
  r["ax.deta_dF_phi_phi"] = m2([&](const V5& X, const V5& Z) {
    return L.de(L.phi_of(X), Z) - L.df(L.phi_of(X), L.phi_of(Z), xi);
  });
  r["ax.deta_minus_dF_xi"] =
      m2([&](const V5& X, const V5& Z) { return L.de(L.phi_of(X), Z) + L.df(X, Z, xi); });
  r["ax.dF_phi_cubed"] = frame_max(tabulate3([&](const V5& X, const V5& Y, const V5& Z) {
                                     return L.df(L.phi_of(X), L.phi_of(Y), L.phi_of(Z)) +
                                            L.df(X, Y, L.phi_of(Z)) - L.et(X) * L.de(Y, Z) -
                                            L.et(Y) * L.de(Z, X);
                                   }),
                                   L.frame);
  return r;
}

// g(hX, Y) = -g(X, hY) = 1/2 d eta(X, Y), h xi = 0, eta o h = 0,
// phi h + h phi = 0 and (nabla_X phi) xi = -phi h X.
inline ResidualMap h_lemma_residuals(const AcmLocal& L) {
  ResidualMap r;
  r["h.skew"] = frame_max(
      tabulate2([&](const V5& X, const V5& Y) { return L.gg(L.h_of(X), Y) + L.gg(X, L.h_of(Y)); }),
      L.frame);
  r["h.half_deta"] = frame_max(
      tabulate2([&](const V5& X, const V5& Y) { return L.gg(L.h_of(X), Y) - 0.5 * L.de(X, Y); }),
      L.frame);
  r["h.xi"] = frame_max(contract_slot(L.h_of(L.xi), 0, L.g), L.frame);
  Vec<double> eh;
  for (int j = 0; j < kDim; ++j)
    for (int k = 0; k < kDim; ++k) eh(j) += L.eta(k) * L.h(k, j);
  r["h.eta"] = frame_max(eh, L.frame);
  r["h.phi_anticommute"] = max_abs(endo_to_frame(matmul(L.phi, L.h) + matmul(L.h, L.phi), L.frame));
  r["h.nabla_phi_xi"] = frame_max(tabulate2([&](const V5& X, const V5& Z) {
                                    return L.nphi(X, L.xi, Z) + L.gg(L.phi_of(L.h_of(X)), Z);
                                  }),
                                  L.frame);
  return r;
}

// Identities for nearly cosymplectic structures involving h and nabla h.
inline ResidualMap nc_h_residuals(const AcmLocal& L, const Tensor3<double>& nabla_h) {
  auto h2 = [&](const V5& v) { return L.h_of(L.h_of(v)); };
  ResidualMap r;
  r["nc.deta_phi"] = frame_max(tabulate2([&](const V5& X, const V5& Y) {
                                 return L.de(L.phi_of(X), Y) - L.de(X, L.phi_of(Y));
                               }),
                               L.frame);
  r["nc.nabla_phi_h"] = frame_max(tabulate3([&](const V5& X, const V5& Y, const V5& Z) {
                                    return L.nphi(X, Y, L.h_of(Z)) -
                                           (L.et(Y) * L.gg(h2(X), L.phi_of(Z)) -
                                            L.et(X) * L.gg(h2(Y), L.phi_of(Z)));
                                  }),
                                  L.frame);
  r["nc.nabla_h"] = frame_max(tabulate3([&](const V5& X, const V5& Y, const V5& Z) {
                                return eval3(nabla_h, X, Y, Z) -
                                       (L.gg(h2(X), Y) * L.et(Z) - L.et(Y) * L.gg(h2(X), Z));
                              }),
                              L.frame);
  return r;
}

// The ANC counterparts: g((nabla_X phi)Y, hZ) = eta(Y) g(h^2 X, phi Z) and
// -R(xi, X, Y, Z) = g((nabla_X h)Y, Z) = -eta(Y) g(h^2 X, Z) + eta(Z) g(h^2 X, Y),
// with both equalities of the second line checked separately.
inline ResidualMap anc_h_residuals(const AcmLocal& L, const Tensor3<double>& nabla_h,
                                   const Tensor4<double>& riemann) {
  auto h2 = [&](const V5& v) { return L.h_of(L.h_of(v)); };
  const auto rl = lower_riemann(riemann, L.g);  // (z, x, y, w) = g(R(z, x)y, w)
  ResidualMap r;
  r["anc.nabla_phi_h"] = frame_max(tabulate3([&](const V5& X, const V5& Y, const V5& Z) {
                                     return L.nphi(X, Y, L.h_of(Z)) -
                                            L.et(Y) * L.gg(h2(X), L.phi_of(Z));
                                   }),
                                   L.frame);
  r["anc.nabla_h_closed"] = frame_max(tabulate3([&](const V5& X, const V5& Y, const V5& Z) {
                                        return eval3(nabla_h, X, Y, Z) -
                                               (-L.et(Y) * L.gg(h2(X), Z) + L.et(Z) * L.gg(h2(X), Y));
                                      }),
                                      L.frame);
  Tensor3<double> rx;  // R(xi, e_i, e_j, e_l)
  for (int i = 0; i < kDim; ++i)
    for (int j = 0; j < kDim; ++j)
      for (int l = 0; l < kDim; ++l) {
        double acc = 0.0;
        for (int c = 0; c < kDim; ++c) acc += L.xi(c) * rl(c, i, j, l);
        rx(i, j, l) = acc;
      }
  r["anc.nabla_h_curvature"] = frame_max(nabla_h + rx, L.frame);
  return r;
}

inline double trace_h_squared(const AcmLocal& L) { return trace(matmul(L.h, L.h)); }

// Eigenvalues of -h^2 restricted to ker eta at one point.
struct HSpectrum {
  std::array<double, kDim - 1> eigenvalues{};
  double median = 0.0;
};

inline HSpectrum h_spectrum(const AcmLocal& L) {
  const Mat<double> m = endo_to_frame(-1.0 * matmul(L.h, L.h), L.frame);
  Eigen::Matrix<double, kDim - 1, kDim - 1> block;
  for (int i = 1; i < kDim; ++i)
    for (int j = 1; j < kDim; ++j) block(i - 1, j - 1) = 0.5 * (m(i, j) + m(j, i));
  const Eigen::SelfAdjointEigenSolver<decltype(block)> es(block);
  HSpectrum s;
  for (int i = 0; i < kDim - 1; ++i) s.eigenvalues[i] = es.eigenvalues()(i);
  s.median = 0.5 * (s.eigenvalues[1] + s.eigenvalues[2]);
  return s;
}

inline constexpr double kLambdaSpreadTolerance = 1e-5;
inline constexpr double kKillingTolerance = 1e-7;

struct LambdaEstimate {
  bool lambda_type = false;
  double lambda = 0.0;
  double spread = 0.0;  // relative spread of all eigenvalues of -h^2 on ker eta
  std::string note;
};

// lambda from h^2 = -lambda^2 (id - eta x xi): all eigenvalues of -h^2 on
// ker eta must agree (across points too) within relative 1e-5.
inline LambdaEstimate estimate_lambda(const std::vector<HSpectrum>& spectra, double killing_residual) {
  LambdaEstimate est;
  if (killing_residual > kKillingTolerance) {
    est.note = "xi is not Killing; lambda extraction skipped";
    return est;
  }
  if (spectra.empty()) {
    est.note = "no sample points";
    return est;
  }
  std::vector<double> all;
  std::vector<double> medians;
  for (const auto& s : spectra) {
    all.insert(all.end(), s.eigenvalues.begin(), s.eigenvalues.end());
    medians.push_back(s.median);
  }
  std::nth_element(medians.begin(), medians.begin() + medians.size() / 2, medians.end());
  const double med = medians[medians.size() / 2];
  const auto [lo, hi] = std::minmax_element(all.begin(), all.end());
  if (std::abs(*hi) <= 1e-10 && std::abs(*lo) <= 1e-10) {
    est.lambda_type = true;
    est.note = "h vanishes";
    return est;
  }
  est.spread = (*hi - *lo) / std::abs(med);
  if (med <= 0.0 || est.spread > kLambdaSpreadTolerance) {
    est.note = "not of lambda-type";
    return est;
  }
  est.lambda_type = true;
  est.lambda = std::sqrt(med);
  return est;
}

// h^2 + lambda^2 (id - eta x xi)
inline double h_square_residual(const AcmLocal& L, double lambda) {
  const Mat<double> m = matmul(L.h, L.h) +
                        (lambda * lambda) * (identity<double, kDim>() - outer(L.xi, L.eta));
  return max_abs(endo_to_frame(m, L.frame));
}

// ---------------------------------------------------------------- SU(2)

struct Su2Local {
  Mat<double> g, frame;
  Vec<double> eta, xi;
  std::array<Mat<double>, 3> omega;
  std::array<Mat<double>, 3> phi;
  Mat<double> deta;
  std::array<Tensor3<double>, 3> domega;
  std::array<Tensor3<double>, 3> eta_omega;    // eta ^ omega_i
  std::array<Tensor4<double>, 3> d_eta_omega;  // d(eta ^ omega_i)
};

template <Su2Quadruple Q>
Su2Local su2_local(const Q& q, const DerivativeEngine& eng, const Point<double>& x) {
  Su2Local L;
  L.g = q.metric(x);
  L.eta = q.eta(x);
  L.xi = q.xi(x);
  L.frame = orthonormal_frame(L.g, &L.xi);
  const auto gi = inverse(L.g);
  L.deta = exterior_derivative(eng, [&q](const auto& y) { return q.eta(y); }, x);
  for (int i = 0; i < 3; ++i) {
    L.omega[i] = q.omega(i + 1, x);
    L.phi[i] = endo_from_two_form(L.omega[i], gi);
    L.domega[i] = exterior_derivative(eng, [&q, i](const auto& y) { return q.omega(i + 1, y); }, x);
    L.eta_omega[i] = wedge(L.eta, L.omega[i]);
    L.d_eta_omega[i] = exterior_derivative(
        eng, [&q, i](const auto& y) { return wedge(q.eta(y), q.omega(i + 1, y)); }, x);
  }
  return L;
}

// d eta = -2c w3, d w1 = k c eta ^ w2, d w2 = -k c eta ^ w1, each residual
// reported separately under `prefix`.
inline void su2_system_terms(const Su2Local& L, double c, double k, const std::string& prefix,
                             ResidualMap& r) {
  const double a = frame_max(L.deta + (2.0 * c) * L.omega[2], L.frame);
  const double b = frame_max(L.domega[0] - (k * c) * L.eta_omega[1], L.frame);
  const double d = frame_max(L.domega[1] + (k * c) * L.eta_omega[0], L.frame);
  r[prefix + ".deta"] = a;
  r[prefix + ".domega1"] = b;
  r[prefix + ".domega2"] = d;
  r[prefix] = std::max({a, b, d});
}

// Systems: Sasaki-Einstein (c = 1, k = 3), hypo, the lambda-scaled nearly
// cosymplectic system (c = lambda, k = 3) and the almost-nearly cosymplectic
// one (c = lambda, k = 2).
inline ResidualMap su2_system_residuals(const Su2Local& L, double lambda) {
  ResidualMap r;
  su2_system_terms(L, 1.0, 3.0, "sasaki_einstein", r);
  su2_system_terms(L, lambda, 3.0, "nc_lambda", r);
  su2_system_terms(L, lambda, 2.0, "anc_lambda", r);
  const double h3 = frame_max(L.domega[2], L.frame);
  const double h1 = frame_max(L.d_eta_omega[0], L.frame);
  const double h2 = frame_max(L.d_eta_omega[1], L.frame);
  r["hypo.domega3"] = h3;
  r["hypo.d_eta_omega1"] = h1;
  r["hypo.d_eta_omega2"] = h2;
  r["hypo"] = std::max({h3, h1, h2});
  return r;
}

// w_i ^ w_j = delta_ij v, phi_i phi_j = -phi_j phi_i = phi_k (even
// permutations) and the orientation condition. "su2.volume_value" is
// |(v ^ eta)(e_0..e_4)|, a value rather than a residual; it must stay away from 0.
inline ResidualMap su2_algebraic_residuals(const Su2Local& L) {
  ResidualMap r;
  std::array<std::array<Tensor4<double>, 3>, 3> ww;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) ww[i][j] = wedge(L.omega[i], L.omega[j]);
  const Tensor4<double> v = ww[0][0];
  double wedge_res = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      wedge_res = std::max(wedge_res, frame_max(i == j ? ww[i][j] - v : ww[i][j], L.frame));
  r["su2.wedge"] = wedge_res;

  double prod = 0.0;
  const int cyc[3][3] = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}};
  for (const auto& c : cyc) {
    const auto& a = L.phi[c[0]];
    const auto& b = L.phi[c[1]];
    const auto& k = L.phi[c[2]];
    prod = std::max(prod, max_abs(endo_to_frame(matmul(a, b) - k, L.frame)));
    prod = std::max(prod, max_abs(endo_to_frame(matmul(b, a) + k, L.frame)));
  }
  r["su2.phi_products"] = prod;

  // X _| w_i = Y _| w_j with Y = phi_k X; then w_k(X, Y) >= 0 is required.
  double orient = 0.0;
  for (const auto& c : cyc)
    for (int a = 1; a < kDim; ++a) {
      Vec<double> X;
      for (int i = 0; i < kDim; ++i) X(i) = L.frame(i, a);
      const Vec<double> Y = apply(L.phi[c[2]], X);
      Vec<double> lhs;
      Vec<double> rhs;
      for (int j = 0; j < kDim; ++j)
        for (int i = 0; i < kDim; ++i) {
          lhs(j) += X(i) * L.omega[c[0]](i, j);
          rhs(j) += Y(i) * L.omega[c[1]](i, j);
        }
      orient = std::max(orient, frame_max(lhs - rhs, L.frame));
      orient = std::max(orient, std::max(0.0, -bilinear(L.omega[c[2]], X, Y)));
    }
  r["su2.orientation"] = orient;

  const auto top = wedge(v, L.eta);
  Tensor<double, kDim, 5> topf = to_frame(top, L.frame);
  r["su2.volume_value"] = std::abs(topf(0, 1, 2, 3, 4));
  return r;
}

}  // namespace cgeo
