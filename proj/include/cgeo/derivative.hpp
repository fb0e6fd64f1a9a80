#pragma once

// Differentiation of tensor-valued functions of chart coordinates.
//
// A field is any callable `f(const Point<U>&) -> Tensor<U, N, R>` that is
// generic in the scalar type U. Autodiff mode evaluates it on Dual<S, N>
// points (one pass yields all N partials); finite-difference mode uses
// central differences on the same callable and is kept as a cross-check.

#include <array>
#include <string>
#include <type_traits>

#include "cgeo/chart.hpp"
#include "cgeo/dual.hpp"
#include "cgeo/errors.hpp"
#include "cgeo/tensor.hpp"

namespace cgeo {

enum class DiffMode { kAutodiff, kFiniteDifference };

struct DerivativeEngine {
  DiffMode mode = DiffMode::kAutodiff;
  double fd_step = 1e-4;

  static constexpr DerivativeEngine autodiff() { return {}; }
  static constexpr DerivativeEngine finite_difference(double h = 1e-4) {
    return {DiffMode::kFiniteDifference, h};
  }
};

template <class F, class S, int N>
using field_result_t = std::invoke_result_t<const F&, const Point<S, N>&>;

// Value and all first partials; `grad(i, ...) = d_i f(...)`.
template <class S, int N, int R>
struct Jet1 {
  Tensor<S, N, R> value;
  Tensor<S, N, R + 1> grad;
};

template <class S, std::size_t NN, class F>
auto jet1(const DerivativeEngine& eng, const F& f, const std::array<S, NN>& x) {
  constexpr int N = static_cast<int>(NN);
  using Out = field_result_t<F, S, N>;
  constexpr int R = Out::kRank;
  constexpr int M = Out::kSize;
  Jet1<S, N, R> out;
  if (eng.mode == DiffMode::kAutodiff) {
    using D = Dual<S, N>;
    Point<D, N> xd;
    for (int i = 0; i < N; ++i) {
      xd[i] = D::constant(x[i]);
      xd[i].d[i] = S(1.0);
    }
    const auto y = f(xd);
    for (int k = 0; k < M; ++k) {
      out.value.c[k] = y.c[k].val;
      for (int i = 0; i < N; ++i) out.grad.c[i * M + k] = y.c[k].d[i];
    }
  } else {
    const double h = eng.fd_step;
    out.value = f(x);
    for (int i = 0; i < N; ++i) {
      Point<S, N> xp = x;
      Point<S, N> xm = x;
      xp[i] = xp[i] + h;
      xm[i] = xm[i] - h;
      const auto yp = f(xp);
      const auto ym = f(xm);
      for (int k = 0; k < M; ++k) out.grad.c[i * M + k] = (yp.c[k] - ym.c[k]) * (0.5 / h);
    }
  }
  return out;
}

// All first partials of f at x, differentiation index first.
template <class S, std::size_t NN, class F>
auto partials(const DerivativeEngine& eng, const F& f, const std::array<S, NN>& x) {
  return jet1(eng, f, x).grad;
}

// All second partials, `(a, b, ...) = d_a d_b f(...)`.
template <class S, std::size_t NN, class F>
auto second_partials(const DerivativeEngine& eng, const F& f, const std::array<S, NN>& x) {
  return partials(eng, [&](const auto& y) { return partials(eng, f, y); }, x);
}

namespace detail {

template <int N, int R>
Tensor<double, N, R> slice_first(const Tensor<double, N, R + 1>& t, int axis) {
  Tensor<double, N, R> r;
  for (int k = 0; k < Tensor<double, N, R>::kSize; ++k)
    r.c[k] = t.c[axis * Tensor<double, N, R>::kSize + k];
  return r;
}

template <class C>
void check_axis(int axis, int n) {
  if (axis < 0 || axis >= n)
    throw DomainError("axis " + std::to_string(axis) + " out of range for dimension " +
                      std::to_string(n));
}

}  // namespace detail

// d f / d x^axis at a chart point, with chart validity enforced.
template <class Chart, class F>
auto partial_derivative(const Chart& chart, const DerivativeEngine& eng, const F& f,
                        const ChartPoint& p, int axis) {
  require_in_chart(chart, p);
  detail::check_axis<Chart>(axis, kDim);
  using Out = field_result_t<F, double, kDim>;
  return detail::slice_first<kDim, Out::kRank>(partials(eng, f, p.coords), axis);
}

template <class Chart, class F>
auto second_partial(const Chart& chart, const DerivativeEngine& eng, const F& f,
                    const ChartPoint& p, int axis_a, int axis_b) {
  require_in_chart(chart, p);
  detail::check_axis<Chart>(axis_a, kDim);
  detail::check_axis<Chart>(axis_b, kDim);
  using Out = field_result_t<F, double, kDim>;
  constexpr int R = Out::kRank;
  const auto h = second_partials(eng, f, p.coords);
  Tensor<double, kDim, R> r;
  for (int k = 0; k < Out::kSize; ++k)
    r.c[k] = h.c[(axis_a * kDim + axis_b) * Out::kSize + k];
  return r;
}

// Largest |T(.., i, .., j, ..) + T(.., j, .., i, ..)| over all slot pairs.
template <int N, int R>
double antisymmetry_residual(const Tensor<double, N, R>& t) {
  double m = 0.0;
  for (int f = 0; f < Tensor<double, N, R>::kSize; ++f) {
    const auto idx = unflatten<N, R>(f);
    for (int a = 0; a < R; ++a)
      for (int b = a + 1; b < R; ++b) {
        auto sw = idx;
        std::swap(sw[a], sw[b]);
        m = std::max(m, std::abs(t.c[f] + t.c[flatten<N, R>(sw)]));
      }
  }
  return m;
}

// Exterior derivative of a k-form field in the determinant convention:
// (d w)_{i0..ik} = sum_m (-1)^m d_{i_m} w_{i0..^i_m..ik}. For a 1-form this is
// d w(X, Y) = X w(Y) - Y w(X) - w([X, Y]).
template <class S, std::size_t NN, class F>
auto exterior_derivative(const DerivativeEngine& eng, const F& form, const std::array<S, NN>& x) {
  constexpr int N = static_cast<int>(NN);
  using Out = field_result_t<F, S, N>;
  constexpr int K = Out::kRank;
  static_assert(K < N, "form degree must be below the dimension");
  const auto j = jet1(eng, form, x);
  if constexpr (K >= 2) {
    // forms built from finite-difference derivatives are only antisymmetric
    // to the accuracy of the differences
    const double limit = eng.mode == DiffMode::kAutodiff ? 1e-10 : 1e-6;
    if (antisymmetry_residual<N, K>(values(j.value)) > limit)
      throw ContractError("exterior_derivative: input is not an antisymmetric form");
  }
  Tensor<S, N, K + 1> out;
  for (int f = 0; f < Tensor<S, N, K + 1>::kSize; ++f) {
    const auto idx = unflatten<N, K + 1>(f);
    S acc{};
    for (int m = 0; m <= K; ++m) {
      std::array<int, K + 1> rest{};
      rest[0] = idx[m];
      int q = 1;
      for (int s = 0; s <= K; ++s)
        if (s != m) rest[q++] = idx[s];
      const S term = j.grad.c[flatten<N, K + 1>(rest)];
      acc = (m % 2 == 0) ? acc + term : acc - term;
    }
    out.c[f] = acc;
  }
  return out;
}

// [X, Y]^k = X^i d_i Y^k - Y^i d_i X^k.
template <class S, std::size_t NN, class FX, class FY>
auto lie_bracket(const DerivativeEngine& eng, const FX& X, const FY& Y, const std::array<S, NN>& x) {
  constexpr int N = static_cast<int>(NN);
  const auto jx = jet1(eng, X, x);
  const auto jy = jet1(eng, Y, x);
  Vec<S, N> out;
  for (int k = 0; k < N; ++k) {
    S acc{};
    for (int i = 0; i < N; ++i)
      acc = acc + jx.value(i) * jy.grad(i, k) - jy.value(i) * jx.grad(i, k);
    out(k) = acc;
  }
  return out;
}

}  // namespace cgeo
