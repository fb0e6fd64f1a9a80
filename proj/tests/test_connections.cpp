#include <catch2/catch_amalgamated.hpp>

#include "cgeo/connections.hpp"
#include "cgeo/models.hpp"
#include "support.hpp"

using namespace cgeo;
using cgeo::testing::kCases;

TEST_CASE("unit sphere has constant curvature 1", "[connections][property]") {
  // R(X, Y)Z = g(Y, Z)X - g(X, Z)Y, Ric = 4g, Scal = 20
  const DerivativeEngine eng;
  for (int n = 0; n < kCases; ++n) {
    CounterRng rng(501, n);
    const auto x = testing::random_point(rng);
    const RoundS5 s5;
    const auto g = s5.metric(x);
    const auto c = curvature(LeviCivita<RoundS5>(s5, eng), g, x);
    const auto X = testing::random_vec(rng);
    const auto Y = testing::random_vec(rng);
    const auto Z = testing::random_vec(rng);
    const Vec<double> expect = bilinear(g, Y, Z) * X - bilinear(g, X, Z) * Y;
    CHECK(max_abs(apply_curvature(c.riemann, X, Y, Z) - expect) <= 1e-10);
    CHECK(max_abs(c.ricci - 4.0 * g) <= 1e-10);
    CHECK(std::abs(c.scalar - 20.0) <= 1e-10);
    const auto sym = curvature_symmetry_residuals(c.riemann, g);
    CHECK(sym.antisymmetry <= 1e-10);
    CHECK(sym.bianchi <= 1e-10);
    CHECK(sym.pair_symmetry <= 1e-10);
  }
}

TEST_CASE("Levi-Civita connection is metric and torsion-free", "[connections][property]") {
  const DerivativeEngine eng;
  for (int n = 0; n < kCases; ++n) {
    CounterRng rng(502, n);
    const auto x = testing::random_point(rng);
    const auto anc = anc_quadruple(RoundS5{}, 1.0, 2.0 * rng.uniform());
    const LeviCivita<decltype(anc)> lc(anc, eng);
    const auto ng = covariant_derivative(lc, [&](const auto& y) { return anc.metric(y); }, kBilinear, x);
    CHECK(max_abs(ng) <= 1e-12);
    CHECK(max_abs(torsion(lc, x)) <= 1e-13);
  }
}

TEST_CASE("flat metric has vanishing Christoffel symbols", "[connections]") {
  const LeviCivita<FlatR5> lc(FlatR5{});
  const Point<double> x{0.1, 0.2, 0.3, 0.4, 0.5};
  CHECK(max_abs(lc.gamma(x)) == 0.0);
  CHECK(max_abs(riemann(lc, x)) == 0.0);
}

TEST_CASE("torsion of a custom connection", "[connections][property]") {
  // Gamma = LC + g^{-1} K with K totally skew gives T = 2 K (lowered), skew
  for (int n = 0; n < kCases; ++n) {
    CounterRng rng(503, n);
    const auto x = testing::random_point(rng);
    const auto a = testing::random_vec(rng);
    const auto b = testing::random_vec(rng);
    const auto c = testing::random_vec(rng);
    const Tensor3<double> k = wedge(wedge(a, b), c);
    const RoundS5 s5;
    auto fn = [&](const auto& y) {
      using U = std::decay_t<decltype(y[0])>;
      Tensor3<U> G = LeviCivita<RoundS5>(s5).gamma(y);
      const Mat<U> gi = inverse(s5.metric(y));
      for (int p = 0; p < kDim; ++p)
        for (int i = 0; i < kDim; ++i)
          for (int j = 0; j < kDim; ++j)
            for (int l = 0; l < kDim; ++l) G(p, i, j) = G(p, i, j) + gi(p, l) * k(i, j, l);
      return G;
    };
    const CustomConnection conn(s5.chart(), fn);
    const auto g = s5.metric(x);
    CHECK(totally_skew_residual(conn, g, x) <= 1e-12);
    CHECK(max_abs(lower_torsion(torsion(conn, x), g) - 2.0 * k) <= 1e-12);
  }
}

TEST_CASE("covariant derivative of a vector field", "[connections]") {
  // on flat space it is the plain Jacobian
  const LeviCivita<FlatR5> lc(FlatR5{});
  auto v = [](const auto& y) {
    using U = std::decay_t<decltype(y[0])>;
    Vec<U> r;
    r(0) = y[1] * y[2];
    r(3) = U(2.0) * y[0];
    return r;
  };
  const Point<double> x{1.0, 2.0, 3.0, 0.0, 0.0};
  const auto nv = covariant_derivative(lc, v, kVector, x);
  CHECK(nv(1, 0) == 3.0);
  CHECK(nv(2, 0) == 2.0);
  CHECK(nv(0, 3) == 2.0);
  CHECK(nv(0, 0) == 0.0);
}

TEST_CASE("Reeb field of the sphere is Killing", "[connections][property]") {
  const DerivativeEngine eng;
  for (int n = 0; n < kCases; ++n) {
    CounterRng rng(504, n);
    const auto x = testing::random_point(rng);
    const RoundS5 s5;
    const auto k = killing_residual(s5, [&](const auto& y) { return s5.xi(y); }, eng, x);
    CHECK(k.symmetric <= 1e-12);
    CHECK(k.half_deta <= 1e-12);
    // the position field of R^5 is not Killing
    const auto k2 = killing_residual(FlatR5{}, [](const auto& y) {
      Vec<std::decay_t<decltype(y[0])>> r;
      for (int i = 0; i < kDim; ++i) r(i) = y[i];
      return r;
    }, eng, x);
    CHECK(k2.symmetric == Catch::Approx(2.0));
  }
}
