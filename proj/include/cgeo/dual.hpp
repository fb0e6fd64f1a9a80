#pragma once

// Forward-mode dual numbers with an N-dimensional derivative part.
//
// Dual<T, N> represents v + sum_i d_i eps_i with eps_i eps_j = 0. Nesting
// (Dual<Dual<double, N>, N>) gives exact higher mixed partials, which is how
// curvature gets second derivatives of the metric without step-size tuning.

#include <array>
#include <cmath>
#include <type_traits>

namespace cgeo {

template <class T, int N>
struct Dual {
  T val{};
  std::array<T, N> d{};

  constexpr Dual() = default;
  constexpr Dual(double c) : val(c) {}  // NOLINT: constants convert implicitly
  constexpr Dual(const T& v, const std::array<T, N>& g)
    requires(!std::is_same_v<T, double>)
      : val(v), d(g) {}
  constexpr Dual(double v, const std::array<double, N>& g)
    requires(std::is_same_v<T, double>)
      : val(v), d(g) {}

  // Lifts a lower-level value as a constant (zero derivative part).
  static constexpr Dual constant(const T& v) {
    Dual r;
    r.val = v;
    return r;
  }

  friend constexpr Dual operator+(const Dual& a) { return a; }
  friend constexpr Dual operator-(const Dual& a) {
    Dual r;
    r.val = -a.val;
    for (int i = 0; i < N; ++i) r.d[i] = -a.d[i];
    return r;
  }

  friend constexpr Dual operator+(const Dual& a, const Dual& b) {
    Dual r;
    r.val = a.val + b.val;
    for (int i = 0; i < N; ++i) r.d[i] = a.d[i] + b.d[i];
    return r;
  }
  friend constexpr Dual operator-(const Dual& a, const Dual& b) {
    Dual r;
    r.val = a.val - b.val;
    for (int i = 0; i < N; ++i) r.d[i] = a.d[i] - b.d[i];
    return r;
  }
  friend constexpr Dual operator*(const Dual& a, const Dual& b) {
    Dual r;
    r.val = a.val * b.val;
    for (int i = 0; i < N; ++i) r.d[i] = a.val * b.d[i] + a.d[i] * b.val;
    return r;
  }
  friend constexpr Dual operator/(const Dual& a, const Dual& b) {
    Dual r;
    const T inv = 1.0 / b.val;
    r.val = a.val * inv;
    for (int i = 0; i < N; ++i) r.d[i] = (a.d[i] - r.val * b.d[i]) * inv;
    return r;
  }

  friend constexpr Dual operator+(const Dual& a, double b) {
    Dual r = a;
    r.val = r.val + b;
    return r;
  }
  friend constexpr Dual operator+(double a, const Dual& b) { return b + a; }
  friend constexpr Dual operator-(const Dual& a, double b) {
    Dual r = a;
    r.val = r.val - b;
    return r;
  }
  friend constexpr Dual operator-(double a, const Dual& b) {
    Dual r = -b;
    r.val = r.val + a;
    return r;
  }
  friend constexpr Dual operator*(const Dual& a, double b) {
    Dual r;
    r.val = a.val * b;
    for (int i = 0; i < N; ++i) r.d[i] = a.d[i] * b;
    return r;
  }
  friend constexpr Dual operator*(double a, const Dual& b) { return b * a; }
  friend constexpr Dual operator/(const Dual& a, double b) { return a * (1.0 / b); }
  friend constexpr Dual operator/(double a, const Dual& b) {
    Dual r;
    const T inv = 1.0 / b.val;
    r.val = a * inv;
    const T f = -(r.val * inv);
    for (int i = 0; i < N; ++i) r.d[i] = f * b.d[i];
    return r;
  }

  constexpr Dual& operator+=(const Dual& o) { return *this = *this + o; }
  constexpr Dual& operator-=(const Dual& o) { return *this = *this - o; }
  constexpr Dual& operator*=(const Dual& o) { return *this = *this * o; }
  constexpr Dual& operator/=(const Dual& o) { return *this = *this / o; }
  constexpr Dual& operator+=(double o) { return *this = *this + o; }
  constexpr Dual& operator-=(double o) { return *this = *this - o; }
  constexpr Dual& operator*=(double o) { return *this = *this * o; }
  constexpr Dual& operator/=(double o) { return *this = *this / o; }

  // Chain rule helper: f(a) given f(a.val) and f'(a.val).
  static constexpr Dual chain(const Dual& a, const T& f, const T& fp) {
    Dual r;
    r.val = f;
    for (int i = 0; i < N; ++i) r.d[i] = fp * a.d[i];
    return r;
  }

  friend Dual sin(const Dual& a) {
    using std::cos;
    using std::sin;
    return chain(a, sin(a.val), cos(a.val));
  }
  friend Dual cos(const Dual& a) {
    using std::cos;
    using std::sin;
    return chain(a, cos(a.val), -sin(a.val));
  }
  friend Dual exp(const Dual& a) {
    using std::exp;
    const T e = exp(a.val);
    return chain(a, e, e);
  }
  friend Dual log(const Dual& a) {
    using std::log;
    return chain(a, log(a.val), 1.0 / a.val);
  }
  friend Dual sqrt(const Dual& a) {
    using std::sqrt;
    const T s = sqrt(a.val);
    return chain(a, s, 0.5 / s);
  }
  friend Dual pow(const Dual& a, double p) {
    using std::pow;
    return chain(a, pow(a.val, p), p * pow(a.val, p - 1.0));
  }
};

template <class T>
struct is_dual : std::false_type {};
template <class T, int N>
struct is_dual<Dual<T, N>> : std::true_type {};
template <class T>
inline constexpr bool is_dual_v = is_dual<T>::value;

// Nesting depth: double is 0, Dual<double, N> is 1, ...
template <class T>
struct dual_depth : std::integral_constant<int, 0> {};
template <class T, int N>
struct dual_depth<Dual<T, N>> : std::integral_constant<int, 1 + dual_depth<T>::value> {};

// Innermost real value.
constexpr double value_of(double x) { return x; }
template <class T, int N>
constexpr double value_of(const Dual<T, N>& x) {
  return value_of(x.val);
}

}  // namespace cgeo
