#pragma once

// Structure transformations: homotheties, D-homothetic deformations, the
// circle family of rotated SU(2) quadruples, single members of a quadruple
// as almost contact metric structures, and the Sasaki-Einstein structure
// attached to a 5-dimensional almost-nearly cosymplectic one.
//
// All wrappers are lazy: fields are recomputed from the wrapped structure
// at each evaluation point, so they compose to any depth and stay generic in
// the scalar type.

#include <cmath>
#include <string>

#include "cgeo/acm.hpp"
#include "cgeo/contact.hpp"
#include "cgeo/errors.hpp"
#include "cgeo/linalg.hpp"
#include "cgeo/tensor.hpp"

namespace cgeo {

template <class A>
concept HasPhi = requires(const A& s, const Point<double>& x) {
  { s.phi(x) } -> std::same_as<Mat<double>>;
};

// g* = c^2 g, eta* = c eta, xi* = xi / c, w* = c^2 w, phi unchanged.
template <class Q>
class Homothety {
 public:
  Homothety(Q q, double c) : q_(std::move(q)), c_(c) {
    if (!(c > 0.0) || !std::isfinite(c)) throw ParameterError("homothety constant must be positive");
  }

  auto chart() const { return q_.chart(); }
  double factor() const { return c_; }

  template <class U>
  Mat<U> metric(const Point<U>& x) const {
    return (c_ * c_) * q_.metric(x);
  }
  template <class U>
  Vec<U> eta(const Point<U>& x) const {
    return c_ * q_.eta(x);
  }
  template <class U>
  Vec<U> xi(const Point<U>& x) const {
    return (1.0 / c_) * q_.xi(x);
  }
  template <class U>
  Mat<U> omega(int i, const Point<U>& x) const {
    return (c_ * c_) * q_.omega(i, x);
  }
  template <class U>
  Mat<U> phi(const Point<U>& x) const
    requires HasPhi<Q>
  {
    return q_.phi(x);
  }

 private:
  Q q_;
  double c_;
};

// eta' = a eta, xi' = xi / a, phi' = phi, g' = a g + (a^2 - a) eta x eta and,
// for quadruples, w'_i = a w_i (so that phi_i is preserved).
template <class A>
class DHomothety {
 public:
  DHomothety(A s, double a) : s_(std::move(s)), a_(a) {
    if (!(a > 0.0) || !std::isfinite(a))
      throw ParameterError("D-homothety constant must be positive, got " + std::to_string(a));
  }

  auto chart() const { return s_.chart(); }
  double constant() const { return a_; }
  const A& base() const { return s_; }

  template <class U>
  Mat<U> metric(const Point<U>& x) const {
    const Vec<U> e = s_.eta(x);
    return a_ * s_.metric(x) + (a_ * a_ - a_) * outer(e, e);
  }
  template <class U>
  Vec<U> eta(const Point<U>& x) const {
    return a_ * s_.eta(x);
  }
  template <class U>
  Vec<U> xi(const Point<U>& x) const {
    return (1.0 / a_) * s_.xi(x);
  }
  template <class U>
  Mat<U> phi(const Point<U>& x) const
    requires HasPhi<A>
  {
    return s_.phi(x);
  }
  template <class U>
  Mat<U> omega(int i, const Point<U>& x) const
    requires Su2Quadruple<A>
  {
    return a_ * s_.omega(i, x);
  }

 private:
  A s_;
  double a_;
};

// Rotation of (w1, w2) by angle t:
// W1 = cos t w1 + sin t w2, W2 = -sin t w1 + cos t w2, w3 unchanged.
template <Su2Quadruple Q>
class Rotated {
 public:
  Rotated(Q q, double t) : q_(std::move(q)), t_(t) {}

  auto chart() const { return q_.chart(); }
  double angle() const { return t_; }

  template <class U>
  Mat<U> metric(const Point<U>& x) const {
    return q_.metric(x);
  }
  template <class U>
  Vec<U> eta(const Point<U>& x) const {
    return q_.eta(x);
  }
  template <class U>
  Vec<U> xi(const Point<U>& x) const {
    return q_.xi(x);
  }
  template <class U>
  Mat<U> omega(int i, const Point<U>& x) const {
    const double c = std::cos(t_);
    const double s = std::sin(t_);
    if (i == 1) return c * q_.omega(1, x) + s * q_.omega(2, x);
    if (i == 2) return (-s) * q_.omega(1, x) + c * q_.omega(2, x);
    return q_.omega(i, x);
  }

 private:
  Q q_;
  double t_;
};

// The almost contact metric structure (phi_i, xi, eta, g) of a quadruple,
// with phi_i defined by w_i(X, Y) = g(phi_i X, Y).
template <Su2Quadruple Q>
class Member {
 public:
  Member(Q q, int index) : q_(std::move(q)), i_(index) {
    if (index < 1 || index > 3) throw ParameterError("quadruple member index must be 1, 2 or 3");
  }

  auto chart() const { return q_.chart(); }
  int index() const { return i_; }
  const Q& quadruple() const { return q_; }

  template <class U>
  Mat<U> metric(const Point<U>& x) const {
    return q_.metric(x);
  }
  template <class U>
  Vec<U> eta(const Point<U>& x) const {
    return q_.eta(x);
  }
  template <class U>
  Vec<U> xi(const Point<U>& x) const {
    return q_.xi(x);
  }
  template <class U>
  Mat<U> phi(const Point<U>& x) const {
    return endo_from_two_form(q_.omega(i_, x), inverse(q_.metric(x)));
  }

 private:
  Q q_;
  int i_;
};

// Sasaki-Einstein structure attached to a 5-dimensional ANC structure with
// h^2 = -lambda^2 (id - eta x xi):
//   phi3 = -h / lambda, eta~ = (2 lambda / 3) eta, xi~ = (3 / (2 lambda)) xi,
//   g~ = (2 lambda^2 / 3) g - (2 lambda^2 / 9) eta x eta,
// with w2 = g~(phi ., .), w1 = g~(phi phi3 ., .), w3 = g~(phi3 ., .). As an
// ACM structure it is (phi3, xi~, eta~, g~).
template <AcmStructure A>
class AttachedSasakiEinstein {
 public:
  AttachedSasakiEinstein(A anc, double lambda, DerivativeEngine eng = {})
      : anc_(std::move(anc)), lambda_(lambda), h_(anc_, eng) {
    if (!(lambda > 0.0))
      throw UnsupportedInput("attached Sasaki-Einstein structure needs lambda > 0 (got " +
                             std::to_string(lambda) + "); the cosymplectic case has none");
  }

  auto chart() const { return anc_.chart(); }
  double lambda() const { return lambda_; }

  template <class U>
  Mat<U> metric(const Point<U>& x) const {
    const Vec<U> e = anc_.eta(x);
    const double l2 = lambda_ * lambda_;
    return (2.0 * l2 / 3.0) * anc_.metric(x) - (2.0 * l2 / 9.0) * outer(e, e);
  }
  template <class U>
  Vec<U> eta(const Point<U>& x) const {
    return (2.0 * lambda_ / 3.0) * anc_.eta(x);
  }
  template <class U>
  Vec<U> xi(const Point<U>& x) const {
    return (1.5 / lambda_) * anc_.xi(x);
  }
  template <class U>
  Mat<U> phi(const Point<U>& x) const {
    return (-1.0 / lambda_) * h_(x);
  }
  template <class U>
  Mat<U> omega(int i, const Point<U>& x) const {
    const Mat<U> g = metric(x);
    if (i == 3) return lower_endo(phi(x), g);
    if (i == 2) return lower_endo(anc_.phi(x), g);
    return lower_endo(matmul(anc_.phi(x), phi(x)), g);
  }

 private:
  A anc_;
  double lambda_;
  HField<A> h_;
};

// Estimates lambda from sampled h-spectra of an ACM structure and builds the
// attached Sasaki-Einstein structure; lambda = 0 (h = 0) is rejected.
template <AcmStructure A>
AttachedSasakiEinstein<A> attach_sasaki_einstein(const A& anc, const LambdaEstimate& est,
                                                 DerivativeEngine eng = {}) {
  if (!est.lambda_type) throw UnsupportedInput("structure is not of lambda-type: " + est.note);
  if (est.lambda <= 1e-8) throw UnsupportedInput("lambda = 0: cosymplectic case has no attached structure");
  return AttachedSasakiEinstein<A>(anc, est.lambda, eng);
}

// g(nabla'_X Y, Z) - g(nabla_X Y, Z) - ((a^2 - a) / 2a)[d eta(X, Z) eta(Y) + d eta(Y, Z) eta(X)]
// for the Levi-Civita connections of a structure and its D-homothetic image.
template <AcmStructure A>
double dhom_connection_relation_residual(const A& s, double a, const DerivativeEngine& eng,
                                         const Point<double>& x) {
  const DHomothety<A> d(s, a);
  const Tensor3<double> diff =
      LeviCivita<DHomothety<A>>(d, eng).gamma(x) - LeviCivita<A>(s, eng).gamma(x);
  const auto g = s.metric(x);
  const auto eta = s.eta(x);
  const auto xi = s.xi(x);
  const auto de = exterior_derivative(eng, [&s](const auto& y) { return s.eta(y); }, x);
  const double c = (a * a - a) / (2.0 * a);
  const auto lowered = lower_torsion(diff, g);  // g(D(e_i, e_j), e_l)
  const auto res = tabulate3([&](const V5& X, const V5& Y, const V5& Z) {
    return eval3(lowered, X, Y, Z) -
           c * (bilinear(de, X, Z) * pair(eta, Y) + bilinear(de, Y, Z) * pair(eta, X));
  });
  return frame_max(res, orthonormal_frame(g, &xi));
}

// Curvature relations between an ANC structure (barred) and the nearly
// cosymplectic structure it is D-homothetic to (a = 3/2), all with
// independently computed curvatures:
//   "curvature_nc": R'(Z, X)Y = R(Z, X)Y + 1/2 g(hZ, Y)hX - 1/2 g(hX, Y)hZ + g(hZ, X)hY
//        + 5/4 eta(Y)eta(Z) h^2 X - 5/4 eta(Y)eta(X) h^2 Z
//        + 1/2 [eta(X) g(h^2 Z, Y) - eta(Z) g(h^2 X, Y)] xi
//   "ricci_nc":     Ric' = Ric + g(h^2 ., .) - 5/4 tr(h^2) eta x eta
// `nc` is the local data of the nearly cosymplectic structure.
inline ResidualMap anc_nc_curvature_residuals(const Tensor4<double>& r_anc, const Tensor4<double>& r_nc,
                                              const AcmLocal& nc) {
  auto h = [&](const V5& v) { return nc.h_of(v); };
  auto h2 = [&](const V5& v) { return nc.h_of(nc.h_of(v)); };
  ResidualMap out;
  const auto rel = tabulate3_lowered(
      [&](const V5& Z, const V5& X, const V5& Y) {
        Vec<double> v = apply_curvature(r_anc, Z, X, Y) - apply_curvature(r_nc, Z, X, Y);
        v -= 0.5 * nc.gg(h(Z), Y) * h(X);
        v += 0.5 * nc.gg(h(X), Y) * h(Z);
        v -= nc.gg(h(Z), X) * h(Y);
        v -= 1.25 * nc.et(Y) * nc.et(Z) * h2(X);
        v += 1.25 * nc.et(Y) * nc.et(X) * h2(Z);
        v -= 0.5 * (nc.et(X) * nc.gg(h2(Z), Y) - nc.et(Z) * nc.gg(h2(X), Y)) * nc.xi;
        return v;
      },
      nc.g);
  out["curvature_nc"] = frame_max(rel, nc.frame);
  const double trh2 = trace_h_squared(nc);
  const auto ric = tabulate2([&](const V5& X, const V5& Y) {
    return bilinear(ricci_from_riemann(r_anc), X, Y) - bilinear(ricci_from_riemann(r_nc), X, Y) -
           nc.gg(h2(X), Y) + 1.25 * trh2 * nc.et(X) * nc.et(Y);
  });
  out["ricci_nc"] = frame_max(ric, nc.frame);
  return out;
}

// The same relation in Sasaki-Einstein quantities (g~, eta~, xi~, phi~ = phi3):
//   R'(Z, X)Y = R~(Z, X)Y + 1/2 g~(phi~Z, Y)phi~X - 1/2 g~(phi~X, Y)phi~Z
//        + g~(phi~Z, X)phi~Y - 5/4 eta~(Y)eta~(Z)X + 5/4 eta~(Y)eta~(X)Z
//        - 1/2 [eta~(X) g~(Z, Y) - eta~(Z) g~(X, Y)] xi~,
// where the third term is read as g~(phi~Z, X) phi~Y.
inline double anc_se_curvature_residual(const Tensor4<double>& r_anc, const Tensor4<double>& r_se,
                                        const Su2Local& se) {
  const Mat<double>& ph = se.phi[2];
  auto p = [&](const V5& v) { return apply(ph, v); };
  auto g = [&](const V5& u, const V5& v) { return bilinear(se.g, u, v); };
  auto e = [&](const V5& v) { return pair(se.eta, v); };
  const auto rel = tabulate3_lowered(
      [&](const V5& Z, const V5& X, const V5& Y) {
        Vec<double> v = apply_curvature(r_anc, Z, X, Y) - apply_curvature(r_se, Z, X, Y);
        v -= 0.5 * g(p(Z), Y) * p(X);
        v += 0.5 * g(p(X), Y) * p(Z);
        v -= g(p(Z), X) * p(Y);
        v += 1.25 * e(Y) * e(Z) * X;
        v -= 1.25 * e(Y) * e(X) * Z;
        v += 0.5 * (e(X) * g(Z, Y) - e(Z) * g(X, Y)) * se.xi;
        return v;
      },
      se.g);
  return frame_max(rel, se.frame);
}

// R'(Z, X) xi' = lambda^2 [eta'(X) Z - eta'(Z) X] on an ANC structure.
inline double anc_curvature_xi_residual(const Tensor4<double>& r_anc, const AcmLocal& anc, double lambda) {
  Tensor3<double> out;
  for (int zi = 0; zi < kDim; ++zi)
    for (int xi = 0; xi < kDim; ++xi) {
      const V5 Z = basis_vector(zi);
      const V5 X = basis_vector(xi);
      Vec<double> v = apply_curvature(r_anc, Z, X, anc.xi) -
                      (lambda * lambda) * (anc.et(X) * Z - anc.et(Z) * X);
      v = contract_slot(v, 0, anc.g);
      for (int l = 0; l < kDim; ++l) out(zi, xi, l) = v(l);
    }
  return frame_max(out, anc.frame);
}

}  // namespace cgeo
