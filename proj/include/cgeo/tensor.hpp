#pragma once

// Dense tensors at a point. Components are stored fully (no packed
// symmetric/antisymmetric storage) in row-major order; variance is a
// convention of the producing function, not part of the type:
//
//   endomorphism A      A(i, j) = A^i_j      (A e_j = A^i_j e_i)
//   (0,2) tensor / form B(i, j) = B_ij
//   connection          G(k, i, j) = Gamma^k_ij, nabla_{e_i} e_j = Gamma^k_ij e_k
//   curvature           R(a, b, c, d) = R^a_bcd, R(e_c, e_d) e_b = R^a_bcd e_a
//   derivative arrays   the differentiation index comes first.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <utility>

#include "cgeo/dual.hpp"

namespace cgeo {

inline constexpr int kDim = 5;

constexpr int ipow(int base, int exp) {
  int r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

template <class S, int N, int R>
struct Tensor {
  static constexpr int kDimension = N;
  static constexpr int kRank = R;
  static constexpr int kSize = ipow(N, R);
  using scalar_type = S;

  std::array<S, kSize> c{};

  template <class... I>
  static constexpr int flat(I... idx) {
    static_assert(sizeof...(I) == R, "index count must equal tensor rank");
    int f = 0;
    ((f = f * N + static_cast<int>(idx)), ...);
    return f;
  }

  template <class... I>
  constexpr S& operator()(I... idx) {
    return c[flat(idx...)];
  }
  template <class... I>
  constexpr const S& operator()(I... idx) const {
    return c[flat(idx...)];
  }

  constexpr Tensor& operator+=(const Tensor& o) {
    for (int k = 0; k < kSize; ++k) c[k] = c[k] + o.c[k];
    return *this;
  }
  constexpr Tensor& operator-=(const Tensor& o) {
    for (int k = 0; k < kSize; ++k) c[k] = c[k] - o.c[k];
    return *this;
  }
  constexpr Tensor& operator*=(double s) {
    for (int k = 0; k < kSize; ++k) c[k] = c[k] * s;
    return *this;
  }

  friend constexpr Tensor operator+(Tensor a, const Tensor& b) { return a += b; }
  friend constexpr Tensor operator-(Tensor a, const Tensor& b) { return a -= b; }
  friend constexpr Tensor operator-(Tensor a) {
    for (int k = 0; k < kSize; ++k) a.c[k] = -a.c[k];
    return a;
  }
  friend constexpr Tensor operator*(Tensor a, double s) { return a *= s; }
  friend constexpr Tensor operator*(double s, Tensor a) { return a *= s; }
  friend constexpr Tensor operator*(Tensor a, const S& s)
    requires(!std::is_same_v<S, double>)
  {
    for (int k = 0; k < kSize; ++k) a.c[k] = a.c[k] * s;
    return a;
  }
  friend constexpr Tensor operator*(const S& s, Tensor a)
    requires(!std::is_same_v<S, double>)
  {
    for (int k = 0; k < kSize; ++k) a.c[k] = s * a.c[k];
    return a;
  }
};

template <class S, int N = kDim>
using Point = std::array<S, N>;
template <class S, int N = kDim>
using Vec = Tensor<S, N, 1>;
template <class S, int N = kDim>
using Mat = Tensor<S, N, 2>;
template <class S, int N = kDim>
using Tensor3 = Tensor<S, N, 3>;
template <class S, int N = kDim>
using Tensor4 = Tensor<S, N, 4>;

template <class S, int N>
constexpr Mat<S, N> identity() {
  Mat<S, N> m;
  for (int i = 0; i < N; ++i) m(i, i) = S(1.0);
  return m;
}

// Strips every dual level, keeping the innermost real values.
template <class S, int N, int R>
Tensor<double, N, R> values(const Tensor<S, N, R>& t) {
  Tensor<double, N, R> r;
  for (int k = 0; k < Tensor<S, N, R>::kSize; ++k) r.c[k] = value_of(t.c[k]);
  return r;
}

template <class S, std::size_t N>
std::array<double, N> values(const std::array<S, N>& p) {
  std::array<double, N> r{};
  for (std::size_t k = 0; k < N; ++k) r[k] = value_of(p[k]);
  return r;
}

template <int N, int R>
double max_abs(const Tensor<double, N, R>& t) {
  double m = 0.0;
  for (double v : t.c) m = std::max(m, std::abs(v));
  return m;
}

// Decodes a flat index into its multi-index.
template <int N, int R>
constexpr std::array<int, R> unflatten(int f) {
  std::array<int, R> idx{};
  for (int s = R - 1; s >= 0; --s) {
    idx[s] = f % N;
    f /= N;
  }
  return idx;
}

template <int N, int R>
constexpr int flatten(const std::array<int, R>& idx) {
  int f = 0;
  for (int s = 0; s < R; ++s) f = f * N + idx[s];
  return f;
}

}  // namespace cgeo
