#include <catch2/catch_amalgamated.hpp>

#include "cgeo/linalg.hpp"
#include "support.hpp"

using namespace cgeo;
using cgeo::testing::kCases;

TEST_CASE("flatten and unflatten are inverse", "[tensor]") {
  for (int f = 0; f < Tensor3<double>::kSize; ++f) CHECK(flatten<kDim, 3>(unflatten<kDim, 3>(f)) == f);
  Tensor3<double> t;
  t(1, 2, 3) = 7.0;
  CHECK(t.c[Tensor3<double>::flat(1, 2, 3)] == 7.0);
  CHECK(unflatten<kDim, 3>(Tensor3<double>::flat(4, 0, 2)) == std::array<int, 3>{4, 0, 2});
}

TEST_CASE("inverse of random SPD matrices", "[linalg][property]") {
  for (int n = 0; n < kCases; ++n) {
    CounterRng rng(201, n);
    const auto g = testing::random_spd(rng);
    const auto gi = inverse(g);
    CHECK(max_abs(matmul(g, gi) - identity<double, kDim>()) <= 1e-12);
    CHECK(max_abs(matmul(gi, g) - identity<double, kDim>()) <= 1e-12);
  }
}

TEST_CASE("inverse rejects a singular matrix", "[linalg]") {
  Mat<double> m = identity<double, kDim>();
  m(4, 4) = 0.0;
  CHECK_THROWS(inverse(m));
}

TEST_CASE("orthonormal frame diagonalizes the metric", "[linalg][property]") {
  for (int n = 0; n < kCases; ++n) {
    CounterRng rng(202, n);
    const auto g = testing::random_spd(rng);
    auto first = testing::random_vec(rng);
    first *= 1.0 / std::sqrt(bilinear(g, first, first));
    const auto e = orthonormal_frame(g, &first);
    CHECK(max_abs(matmul(transpose(e), matmul(g, e)) - identity<double, kDim>()) <= 1e-12);
    for (int i = 0; i < kDim; ++i) CHECK(std::abs(e(i, 0) - first(i)) <= 1e-12);
  }
}

TEST_CASE("endomorphism and 2-form conversions round-trip", "[linalg][property]") {
  for (int n = 0; n < kCases; ++n) {
    CounterRng rng(203, n);
    const auto g = testing::random_spd(rng);
    const auto w = testing::random_two_form(rng);
    const auto a = endo_from_two_form(w, inverse(g));
    CHECK(max_abs(two_form_from_endo(a, g) - w) <= 1e-12);
  }
}

TEST_CASE("two_form_from_endo rejects a g-symmetric endomorphism", "[linalg]") {
  CHECK_THROWS_AS(two_form_from_endo(identity<double, kDim>(), identity<double, kDim>()), ContractError);
}

TEST_CASE("wedge product is associative and graded commutative", "[linalg][property]") {
  for (int n = 0; n < kCases; ++n) {
    CounterRng rng(204, n);
    const auto a = testing::random_vec(rng);
    const auto b = testing::random_vec(rng);
    const auto c = testing::random_vec(rng);
    const auto w = testing::random_two_form(rng);
    const auto v = testing::random_two_form(rng);
    CHECK(max_abs(wedge(a, b) + wedge(b, a)) <= 1e-12);
    CHECK(max_abs(wedge(a, a)) == 0.0);
    CHECK(max_abs(wedge(wedge(a, b), c) - wedge(a, wedge(b, c))) <= 1e-12);
    CHECK(max_abs(wedge(a, w) - wedge(w, a)) <= 1e-12);
    CHECK(max_abs(wedge(w, v) - wedge(v, w)) <= 1e-11);
    CHECK(max_abs(wedge(wedge(w, a), b) - wedge(w, wedge(a, b))) <= 1e-11);
    // (a ^ b)(X, Y) = a(X) b(Y) - a(Y) b(X)
    const auto ab = wedge(a, b);
    CHECK(std::abs(ab(0, 1) - (a(0) * b(1) - a(1) * b(0))) <= 1e-14);
  }
}

TEST_CASE("numerical rank of a 2-form with a kernel", "[linalg]") {
  Mat<double> w;
  w(0, 1) = 1.0;
  w(1, 0) = -1.0;
  w(2, 3) = 2.0;
  w(3, 2) = -2.0;
  CHECK(numerical_rank(w) == 4);
  CHECK(numerical_rank(identity<double, kDim>()) == 5);
}
