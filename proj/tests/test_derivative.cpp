#include <catch2/catch_amalgamated.hpp>

#include "cgeo/derivative.hpp"
#include "cgeo/linalg.hpp"
#include "support.hpp"

using namespace cgeo;
using cgeo::testing::kCases;

namespace {

template <class U>
using Scalar = Tensor<U, kDim, 0>;

}  // namespace

TEST_CASE("d of an exact form vanishes", "[derivative][property]") {
  const auto eng = DerivativeEngine::autodiff();
  for (int n = 0; n < kCases; ++n) {
    CounterRng rng(301, n);
    const testing::PolyField<1> one(rng);
    const testing::PolyTwoForm two(rng);
    const auto x = testing::random_point(rng);
    auto d_one = [&](const auto& y) { return exterior_derivative(eng, one, y); };
    auto d_two = [&](const auto& y) { return exterior_derivative(eng, two, y); };
    CHECK(max_abs(exterior_derivative(eng, d_one, x)) <= 1e-12);
    CHECK(max_abs(exterior_derivative(eng, d_two, x)) <= 1e-12);
  }
}

TEST_CASE("d of a function is its gradient", "[derivative]") {
  auto f = [](const auto& y) {
    using U = std::decay_t<decltype(y[0])>;
    Scalar<U> s;
    s.c[0] = y[0] * y[1] + 3.0 * y[4];
    return s;
  };
  const Point<double> x{2.0, -1.0, 0.0, 0.0, 5.0};
  const auto d = exterior_derivative(DerivativeEngine::autodiff(), f, x);
  CHECK(d(0) == -1.0);
  CHECK(d(1) == 2.0);
  CHECK(d(4) == 3.0);
}

TEST_CASE("d of a 1-form matches the invariant formula with the Lie bracket", "[derivative][property]") {
  const auto eng = DerivativeEngine::autodiff();
  for (int n = 0; n < kCases; ++n) {
    CounterRng rng(302, n);
    const testing::PolyField<1> w(rng);
    const testing::PolyField<1> X(rng);
    const testing::PolyField<1> Y(rng);
    const auto x = testing::random_point(rng);
    // dw(X, Y) = X w(Y) - Y w(X) - w([X, Y])
    auto wY = [&](const auto& y) {
      Scalar<std::decay_t<decltype(y[0])>> s;
      s.c[0] = pair(w(y), Y(y));
      return s;
    };
    auto wX = [&](const auto& y) {
      Scalar<std::decay_t<decltype(y[0])>> s;
      s.c[0] = pair(w(y), X(y));
      return s;
    };
    const auto Xv = X(x);
    const auto Yv = Y(x);
    const double lhs = bilinear(exterior_derivative(eng, w, x), Xv, Yv);
    const double rhs = pair(partials(eng, wY, x), Xv) - pair(partials(eng, wX, x), Yv) -
                       pair(w(x), lie_bracket(eng, X, Y, x));
    CHECK(std::abs(lhs - rhs) <= 1e-11 * std::max(1.0, std::abs(lhs)));
  }
}

TEST_CASE("Lie bracket is antisymmetric", "[derivative][property]") {
  const auto eng = DerivativeEngine::autodiff();
  for (int n = 0; n < kCases; ++n) {
    CounterRng rng(303, n);
    const testing::PolyField<1> X(rng);
    const testing::PolyField<1> Y(rng);
    const auto x = testing::random_point(rng);
    CHECK(max_abs(lie_bracket(eng, X, Y, x) + lie_bracket(eng, Y, X, x)) <= 1e-12);
    CHECK(max_abs(lie_bracket(eng, X, X, x)) <= 1e-12);
  }
}

TEST_CASE("finite-difference d tracks autodiff d", "[derivative][property]") {
  for (int n = 0; n < kCases; ++n) {
    CounterRng rng(304, n);
    const testing::PolyTwoForm w(rng);
    const auto x = testing::random_point(rng);
    const auto ad = exterior_derivative(DerivativeEngine::autodiff(), w, x);
    const auto fd = exterior_derivative(DerivativeEngine::finite_difference(1e-5), w, x);
    CHECK(max_abs(ad - fd) <= 1e-6);
  }
}

TEST_CASE("exterior derivative rejects a non-antisymmetric input", "[derivative]") {
  CounterRng rng(305, 0);
  const testing::PolyField<2> m(rng);
  CHECK_THROWS_AS(exterior_derivative(DerivativeEngine::autodiff(), m, testing::random_point(rng)),
                  ContractError);
}
