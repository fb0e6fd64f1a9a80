#pragma once

// Generators for the property tests. Everything is drawn from CounterRng so a
// failing case can be replayed from (seed, case index).

#include <array>
#include <cmath>
#include <cstdint>

#include "cgeo/linalg.hpp"
#include "cgeo/models.hpp"
#include "cgeo/sampling.hpp"
#include "cgeo/tensor.hpp"

namespace cgeo::testing {

inline constexpr int kCases = 25;

inline Point<double> random_point(CounterRng& rng, double box = 1.0) {
  Point<double> x;
  for (auto& v : x) v = box * (2.0 * rng.uniform() - 1.0);
  return x;
}

inline Vec<double> random_vec(CounterRng& rng) {
  Vec<double> v;
  for (auto& c : v.c) c = rng.normal();
  return v;
}

inline Mat<double> random_mat(CounterRng& rng) {
  Mat<double> m;
  for (auto& c : m.c) c = rng.normal();
  return m;
}

inline Mat<double> random_two_form(CounterRng& rng) {
  const Mat<double> m = random_mat(rng);
  return m - transpose(m);
}

// A A^T + I: symmetric positive definite, condition number kept moderate.
inline Mat<double> random_spd(CounterRng& rng) {
  Mat<double> a = random_mat(rng);
  a *= 0.5;
  return matmul(a, transpose(a)) + identity<double, kDim>();
}

inline std::array<double, kAmbientDim> random_unit6(CounterRng& rng) {
  std::array<double, kAmbientDim> u{};
  double n2 = 0.0;
  for (auto& v : u) {
    v = rng.normal();
    n2 += v * v;
  }
  for (auto& v : u) v /= std::sqrt(n2);
  return u;
}

// Random smooth tensor field of rank R on R^5: quadratic polynomial plus a
// sine term per component, generic in the scalar type.
template <int R>
struct PolyField {
  static constexpr int kSize = Tensor<double, kDim, R>::kSize;
  std::array<double, kSize> c0{};
  std::array<std::array<double, kDim>, kSize> c1{};
  std::array<std::array<double, kDim>, kSize> c2{};
  std::array<double, kSize> s{};

  explicit PolyField(CounterRng& rng) {
    for (int k = 0; k < kSize; ++k) {
      c0[k] = rng.normal();
      s[k] = rng.normal();
      for (int i = 0; i < kDim; ++i) {
        c1[k][i] = rng.normal();
        c2[k][i] = rng.normal();
      }
    }
  }

  template <class U>
  Tensor<U, kDim, R> operator()(const Point<U>& x) const {
    using std::sin;
    Tensor<U, kDim, R> out;
    for (int k = 0; k < kSize; ++k) {
      U acc = U(c0[k]);
      for (int i = 0; i < kDim; ++i) acc = acc + c1[k][i] * x[i] + c2[k][i] * x[i] * x[(i + 1) % kDim];
      out.c[k] = acc + s[k] * sin(x[k % kDim]);
    }
    return out;
  }
};

// Antisymmetrized PolyField<2>: a 2-form field.
struct PolyTwoForm {
  PolyField<2> f;
  explicit PolyTwoForm(CounterRng& rng) : f(rng) {}
  template <class U>
  Mat<U> operator()(const Point<U>& x) const {
    const Mat<U> m = f(x);
    Mat<U> w;
    for (int i = 0; i < kDim; ++i)
      for (int j = 0; j < kDim; ++j) w(i, j) = m(i, j) - m(j, i);
    return w;
  }
};

}  // namespace cgeo::testing
