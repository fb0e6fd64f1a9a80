#pragma once

// Pointwise multilinear algebra: products, inverses, musical isomorphisms,
// the endomorphism <-> 2-form correspondence, wedge products and orthonormal
// frames. Everything is generic in the scalar type unless it needs a
// spectral decomposition (those work on double and use Eigen).

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <vector>

#include "cgeo/errors.hpp"
#include "cgeo/tensor.hpp"

namespace cgeo {

template <class S, int N>
Mat<S, N> matmul(const Mat<S, N>& a, const Mat<S, N>& b) {
  Mat<S, N> r;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      S acc{};
      for (int k = 0; k < N; ++k) acc = acc + a(i, k) * b(k, j);
      r(i, j) = acc;
    }
  return r;
}

template <class S, int N>
Mat<S, N> transpose(const Mat<S, N>& a) {
  Mat<S, N> r;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) r(i, j) = a(j, i);
  return r;
}

// (A v)^i = A^i_j v^j
template <class S, int N>
Vec<S, N> apply(const Mat<S, N>& a, const Vec<S, N>& v) {
  Vec<S, N> r;
  for (int i = 0; i < N; ++i) {
    S acc{};
    for (int j = 0; j < N; ++j) acc = acc + a(i, j) * v(j);
    r(i) = acc;
  }
  return r;
}

// B(u, v) = B_ij u^i v^j
template <class S, int N>
S bilinear(const Mat<S, N>& b, const Vec<S, N>& u, const Vec<S, N>& v) {
  S acc{};
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) acc = acc + b(i, j) * u(i) * v(j);
  return acc;
}

template <class S, int N>
S pair(const Vec<S, N>& form, const Vec<S, N>& v) {
  S acc{};
  for (int i = 0; i < N; ++i) acc = acc + form(i) * v(i);
  return acc;
}

template <class S, int N>
Mat<S, N> outer(const Vec<S, N>& a, const Vec<S, N>& b) {
  Mat<S, N> r;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) r(i, j) = a(i) * b(j);
  return r;
}

template <class S, int N>
S trace(const Mat<S, N>& a) {
  S acc{};
  for (int i = 0; i < N; ++i) acc = acc + a(i, i);
  return acc;
}

// Gauss-Jordan with partial pivoting on the innermost real value.
template <class S, int N>
Mat<S, N> inverse(const Mat<S, N>& m) {
  Mat<S, N> a = m;
  Mat<S, N> inv = identity<S, N>();
  double scale = 0.0;
  for (const auto& v : m.c) scale = std::max(scale, std::abs(value_of(v)));
  for (int col = 0; col < N; ++col) {
    int piv = col;
    for (int r = col + 1; r < N; ++r)
      if (std::abs(value_of(a(r, col))) > std::abs(value_of(a(piv, col)))) piv = r;
    const double pv = value_of(a(piv, col));
    if (!std::isfinite(pv) || std::abs(pv) <= 1e-14 * std::max(scale, 1e-300))
      throw NumericError("inverse: matrix is singular");
    if (piv != col)
      for (int k = 0; k < N; ++k) {
        std::swap(a(piv, k), a(col, k));
        std::swap(inv(piv, k), inv(col, k));
      }
    const S ip = 1.0 / a(col, col);
    for (int k = 0; k < N; ++k) {
      a(col, k) = a(col, k) * ip;
      inv(col, k) = inv(col, k) * ip;
    }
    for (int r = 0; r < N; ++r) {
      if (r == col) continue;
      const S f = a(r, col);
      for (int k = 0; k < N; ++k) {
        a(r, k) = a(r, k) - f * a(col, k);
        inv(r, k) = inv(r, k) - f * inv(col, k);
      }
    }
  }
  return inv;
}

// Contracts `slot` of t with the (symmetric) matrix m:
// r(.., a, ..) = sum_b m(a, b) t(.., b, ..). With m = g this lowers an upper
// index; with m = g^{-1} it raises a lower one.
template <class S, int N, int R>
Tensor<S, N, R> contract_slot(const Tensor<S, N, R>& t, int slot, const Mat<S, N>& m) {
  if (slot < 0 || slot >= R) throw ContractError("contract_slot: slot out of range");
  Tensor<S, N, R> r;
  const int stride = ipow(N, R - 1 - slot);
  for (int f = 0; f < Tensor<S, N, R>::kSize; ++f) {
    const int a = (f / stride) % N;
    const int base = f - a * stride;
    S acc{};
    for (int b = 0; b < N; ++b) acc = acc + m(a, b) * t.c[base + b * stride];
    r.c[f] = acc;
  }
  return r;
}

template <class S, int N, int R>
Tensor<S, N, R> lower_index(const Tensor<S, N, R>& t, int slot, const Mat<S, N>& g) {
  return contract_slot(t, slot, g);
}

template <class S, int N, int R>
Tensor<S, N, R> raise_index(const Tensor<S, N, R>& t, int slot, const Mat<S, N>& g_inv) {
  return contract_slot(t, slot, g_inv);
}

// Symmetric part of g(A., .) must vanish within this bound for
// two_form_from_endo to accept its input.
inline constexpr double kTwoFormSymmetryTolerance = 1e-8;

// F(X, Y) = g(A X, Y), i.e. F_ij = A^k_i g_kj.
template <class S, int N>
Mat<S, N> two_form_from_endo(const Mat<S, N>& a, const Mat<S, N>& g) {
  Mat<S, N> f;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      S acc{};
      for (int k = 0; k < N; ++k) acc = acc + a(k, i) * g(k, j);
      f(i, j) = acc;
    }
  double sym = 0.0;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) sym = std::max(sym, std::abs(value_of(f(i, j) + f(j, i))));
  if (sym > kTwoFormSymmetryTolerance)
    throw ContractError("two_form_from_endo: g(A., .) is not antisymmetric");
  return f;
}

// Inverse of two_form_from_endo: A^k_i = g^{kj} w_ij.
template <class S, int N>
Mat<S, N> endo_from_two_form(const Mat<S, N>& w, const Mat<S, N>& g_inv) {
  Mat<S, N> a;
  for (int k = 0; k < N; ++k)
    for (int i = 0; i < N; ++i) {
      S acc{};
      for (int j = 0; j < N; ++j) acc = acc + g_inv(k, j) * w(i, j);
      a(k, i) = acc;
    }
  return a;
}

namespace detail {

struct Perm {
  std::vector<std::array<int, 5>> perms;
  std::vector<int> signs;
};

inline const Perm& permutations(int n) {
  static const std::array<Perm, 6> table = [] {
    std::array<Perm, 6> t;
    for (int m = 0; m <= 5; ++m) {
      std::array<int, 5> p{};
      std::iota(p.begin(), p.begin() + m, 0);
      do {
        int inv = 0;
        for (int i = 0; i < m; ++i)
          for (int j = i + 1; j < m; ++j)
            if (p[i] > p[j]) ++inv;
        t[m].perms.push_back(p);
        t[m].signs.push_back(inv % 2 == 0 ? 1 : -1);
      } while (std::next_permutation(p.begin(), p.begin() + m));
    }
    return t;
  }();
  return table[n];
}

}  // namespace detail

// Wedge product in the determinant convention:
// (a ^ b)(X_1..X_{p+q}) = 1/(p! q!) sum_sigma sgn(sigma) a(X_sigma..) b(X_sigma..).
// For a 1-form and a 2-form this is a(X)b(Y,Z) + a(Y)b(Z,X) + a(Z)b(X,Y).
template <class S, int N, int P, int Q>
Tensor<S, N, P + Q> wedge(const Tensor<S, N, P>& a, const Tensor<S, N, Q>& b) {
  static_assert(P + Q <= 5 && P + Q <= N, "wedge degree too large");
  const auto& perm = detail::permutations(P + Q);
  double norm = 1.0;
  for (int i = 2; i <= P; ++i) norm *= i;
  for (int i = 2; i <= Q; ++i) norm *= i;
  Tensor<S, N, P + Q> r;
  for (int f = 0; f < Tensor<S, N, P + Q>::kSize; ++f) {
    const auto idx = unflatten<N, P + Q>(f);
    bool repeated = false;
    for (int i = 0; i < P + Q && !repeated; ++i)
      for (int j = i + 1; j < P + Q; ++j)
        if (idx[i] == idx[j]) repeated = true;
    if (repeated) continue;
    S acc{};
    for (std::size_t k = 0; k < perm.perms.size(); ++k) {
      const auto& p = perm.perms[k];
      std::array<int, P> ia{};
      std::array<int, Q> ib{};
      for (int s = 0; s < P; ++s) ia[s] = idx[p[s]];
      for (int s = 0; s < Q; ++s) ib[s] = idx[p[P + s]];
      const S term = a.c[flatten<N, P>(ia)] * b.c[flatten<N, Q>(ib)];
      acc = perm.signs[k] > 0 ? acc + term : acc - term;
    }
    r.c[f] = acc * (1.0 / norm);
  }
  return r;
}

// Orthonormal frame for g by Gram-Schmidt. Column a of the result holds the
// coordinate components of e_a. If `first` is given it is normalised and
// used as e_0; the remaining vectors come from the coordinate frame.
template <int N>
Mat<double, N> orthonormal_frame(const Mat<double, N>& g, const Vec<double, N>* first = nullptr) {
  std::vector<Vec<double, N>> basis;
  auto gdot = [&](const Vec<double, N>& u, const Vec<double, N>& v) { return bilinear(g, u, v); };
  auto try_add = [&](Vec<double, N> v) {
    for (const auto& e : basis) {
      const double c = gdot(v, e);
      for (int i = 0; i < N; ++i) v(i) -= c * e(i);
    }
    const double n2 = gdot(v, v);
    if (n2 <= 1e-20) return;
    const double n = std::sqrt(n2);
    for (int i = 0; i < N; ++i) v(i) /= n;
    basis.push_back(v);
  };
  if (first != nullptr) try_add(*first);
  for (int k = 0; k < N && static_cast<int>(basis.size()) < N; ++k) {
    Vec<double, N> e;
    e(k) = 1.0;
    try_add(e);
  }
  if (static_cast<int>(basis.size()) != N) throw NumericError("orthonormal_frame: degenerate metric");
  Mat<double, N> frame;
  for (int a = 0; a < N; ++a)
    for (int i = 0; i < N; ++i) frame(i, a) = basis[a](i);
  return frame;
}

// Components of a fully covariant tensor in the frame (columns of `frame`).
template <int N, int R>
Tensor<double, N, R> to_frame(const Tensor<double, N, R>& t, const Mat<double, N>& frame) {
  Tensor<double, N, R> r = t;
  const Mat<double, N> ft = transpose(frame);
  for (int s = 0; s < R; ++s) r = contract_slot(r, s, ft);
  return r;
}

// Max |component| of a covariant tensor in an orthonormal frame.
template <int N, int R>
double frame_max(const Tensor<double, N, R>& t, const Mat<double, N>& frame) {
  return max_abs(to_frame(t, frame));
}

template <int N>
Eigen::Matrix<double, N, N> to_eigen(const Mat<double, N>& m) {
  Eigen::Matrix<double, N, N> e;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) e(i, j) = m(i, j);
  return e;
}

template <int N>
Eigen::Matrix<double, N, 1> singular_values(const Mat<double, N>& m) {
  return Eigen::JacobiSVD<Eigen::Matrix<double, N, N>>(to_eigen(m)).singularValues();
}

// Numerical rank with threshold rel_tol * (largest singular value).
template <int N>
int numerical_rank(const Mat<double, N>& m, double rel_tol = 1e-8) {
  const auto sv = singular_values(m);
  const double smax = sv.maxCoeff();
  if (smax == 0.0) return 0;
  int r = 0;
  for (int i = 0; i < N; ++i)
    if (sv(i) > rel_tol * smax) ++r;
  return r;
}

template <int N = kDim>
Vec<double, N> basis_vector(int i) {
  Vec<double, N> e;
  e(i) = 1.0;
  return e;
}

// T(u, v, w) for a covariant 3-tensor.
template <int N>
double eval3(const Tensor<double, N, 3>& t, const Vec<double, N>& u, const Vec<double, N>& v,
             const Vec<double, N>& w) {
  double acc = 0.0;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      for (int k = 0; k < N; ++k) acc += t(i, j, k) * u(i) * v(j) * w(k);
  return acc;
}

// Components of a bilinear / trilinear expression on the coordinate basis.
template <class Fn>
Mat<double> tabulate2(const Fn& f) {
  Mat<double> r;
  for (int i = 0; i < kDim; ++i)
    for (int j = 0; j < kDim; ++j) r(i, j) = f(basis_vector(i), basis_vector(j));
  return r;
}

template <class Fn>
Tensor3<double> tabulate3(const Fn& f) {
  Tensor3<double> r;
  for (int i = 0; i < kDim; ++i)
    for (int j = 0; j < kDim; ++j)
      for (int k = 0; k < kDim; ++k) r(i, j, k) = f(basis_vector(i), basis_vector(j), basis_vector(k));
  return r;
}

// Vector-valued trilinear expression, lowered with g so that it can be
// measured in an orthonormal frame: r(i, j, k, l) = g(f(e_i, e_j, e_k), e_l).
template <class Fn>
Tensor4<double> tabulate3_lowered(const Fn& f, const Mat<double>& g) {
  Tensor4<double> r;
  for (int i = 0; i < kDim; ++i)
    for (int j = 0; j < kDim; ++j)
      for (int k = 0; k < kDim; ++k) {
        const Vec<double> v = contract_slot(f(basis_vector(i), basis_vector(j), basis_vector(k)), 0, g);
        for (int l = 0; l < kDim; ++l) r(i, j, k, l) = v(l);
      }
  return r;
}

// Endomorphism components in a frame: E^{-1} A E.
template <int N>
Mat<double, N> endo_to_frame(const Mat<double, N>& a, const Mat<double, N>& frame) {
  return matmul(inverse(frame), matmul(a, frame));
}

}  // namespace cgeo
