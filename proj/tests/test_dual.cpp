#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "cgeo/derivative.hpp"
#include "cgeo/dual.hpp"
#include "support.hpp"

using namespace cgeo;
using cgeo::testing::kCases;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

using D1 = Dual<double, 1>;
using D2 = Dual<D1, 1>;

D1 seed1(double x) { return D1(x, {1.0}); }

D2 seed2(double x) {
  D2 r = D2::constant(seed1(x));
  r.d[0] = D1(1.0);
  return r;
}

}  // namespace

TEST_CASE("elementary functions match their analytic derivatives", "[dual]") {
  for (double x : {0.3, 1.1, 2.7}) {
    const auto s = sin(seed1(x));
    CHECK_THAT(s.d[0], WithinAbs(std::cos(x), 1e-15));
    const auto e = exp(seed1(x)) * cos(seed1(x));
    CHECK_THAT(e.d[0], WithinRel(std::exp(x) * (std::cos(x) - std::sin(x)), 1e-14));
    const auto l = log(seed1(x)) / sqrt(seed1(x));
    CHECK_THAT(l.d[0], WithinRel((1.0 - 0.5 * std::log(x)) / std::pow(x, 1.5), 1e-13));
    const auto p = pow(seed1(x), 2.5);
    CHECK_THAT(p.d[0], WithinRel(2.5 * std::pow(x, 1.5), 1e-14));
    const auto q = 1.0 / (1.0 + seed1(x) * seed1(x));
    CHECK_THAT(q.d[0], WithinRel(-2.0 * x / ((1 + x * x) * (1 + x * x)), 1e-14));
  }
}

TEST_CASE("nested duals give exact second derivatives", "[dual]") {
  for (double x : {-1.5, 0.25, 2.0}) {
    const auto c = seed2(x) * seed2(x) * seed2(x);
    CHECK_THAT(c.val.val, WithinAbs(x * x * x, 1e-14));
    CHECK_THAT(c.val.d[0], WithinAbs(3 * x * x, 1e-13));
    CHECK_THAT(c.d[0].d[0], WithinAbs(6 * x, 1e-13));
    const auto s = sin(seed2(x));
    CHECK_THAT(s.d[0].d[0], WithinAbs(-std::sin(x), 1e-15));
  }
}

TEST_CASE("constant() carries no derivative part", "[dual]") {
  const auto c = D2::constant(seed1(2.0));
  CHECK(c.d[0].val == 0.0);
  CHECK(c.val.d[0] == 1.0);
  CHECK(value_of(c) == 2.0);
  STATIC_CHECK(dual_depth<D2>::value == 2);
  STATIC_CHECK(is_dual_v<D1>);
  STATIC_CHECK_FALSE(is_dual_v<double>);
}

TEST_CASE("autodiff partials agree with central differences on random fields", "[dual][property]") {
  for (int n = 0; n < kCases; ++n) {
    CounterRng rng(101, n);
    const testing::PolyField<2> f(rng);
    const auto x = testing::random_point(rng);
    const auto ad = partials(DerivativeEngine::autodiff(), f, x);
    const auto fd = partials(DerivativeEngine::finite_difference(1e-5), f, x);
    double scale = 1.0;
    for (double v : ad.c) scale = std::max(scale, std::abs(v));
    CHECK(max_abs(ad - fd) <= 1e-7 * scale);
  }
}

TEST_CASE("second partials are symmetric and match differenced first partials", "[dual][property]") {
  for (int n = 0; n < kCases; ++n) {
    CounterRng rng(102, n);
    const testing::PolyField<1> f(rng);
    const auto x = testing::random_point(rng);
    const auto h = second_partials(DerivativeEngine::autodiff(), f, x);
    double asym = 0.0;
    for (int a = 0; a < kDim; ++a)
      for (int b = 0; b < kDim; ++b)
        for (int k = 0; k < kDim; ++k) asym = std::max(asym, std::abs(h(a, b, k) - h(b, a, k)));
    CHECK(asym <= 1e-12);
    const auto hf = second_partials(DerivativeEngine::finite_difference(1e-4), f, x);
    CHECK(max_abs(h - hf) <= 1e-5);
  }
}
