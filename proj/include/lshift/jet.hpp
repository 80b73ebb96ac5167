#pragma once

#include <array>
#include <cstddef>

namespace lshift {

//! Truncated Taylor polynomial c_0 + c_1 t + ... + c_K t^K.
//!
//! Jet<1> is a forward-mode dual number; higher orders carry the Taylor
//! coefficients of a function around an expansion point. Arithmetic is exact
//! up to order K (products and quotients are truncated, never approximated).
template <int K> class Jet {
public:
  static_assert(K >= 0);
  static constexpr int order = K;

  constexpr Jet() : c_{} {}
  constexpr Jet(double value) : c_{} { c_[0] = value; } // NOLINT: implicit by design of the arithmetic

  //! Independent variable t expanded around `at`.
  static constexpr Jet variable(double at) {
    Jet j(at);
    if constexpr (K >= 1)
      j.c_[1] = 1.0;
    return j;
  }

  constexpr double value() const { return c_[0]; }
  constexpr double operator[](std::size_t k) const { return c_[k]; }
  constexpr double &operator[](std::size_t k) { return c_[k]; }

  //! First derivative with respect to t at the expansion point.
  constexpr double derivative() const {
    if constexpr (K >= 1)
      return c_[1];
    else
      return 0.0;
  }

  constexpr Jet &operator+=(const Jet &o) {
    for (int k = 0; k <= K; ++k)
      c_[k] += o.c_[k];
    return *this;
  }
  constexpr Jet &operator-=(const Jet &o) {
    for (int k = 0; k <= K; ++k)
      c_[k] -= o.c_[k];
    return *this;
  }
  constexpr Jet &operator*=(double s) {
    for (auto &x : c_)
      x *= s;
    return *this;
  }
  constexpr Jet &operator*=(const Jet &o) { return *this = *this * o; }
  constexpr Jet &operator/=(const Jet &o) { return *this = *this / o; }

  friend constexpr Jet operator-(Jet a) {
    for (auto &x : a.c_)
      x = -x;
    return a;
  }
  friend constexpr Jet operator+(Jet a, const Jet &b) { return a += b; }
  friend constexpr Jet operator-(Jet a, const Jet &b) { return a -= b; }
  friend constexpr Jet operator*(Jet a, double s) { return a *= s; }
  friend constexpr Jet operator*(double s, Jet a) { return a *= s; }

  friend constexpr Jet operator*(const Jet &a, const Jet &b) {
    Jet r;
    for (int i = 0; i <= K; ++i) {
      if (a.c_[i] == 0.0)
        continue;
      for (int j = 0; i + j <= K; ++j)
        r.c_[i + j] += a.c_[i] * b.c_[j];
    }
    return r;
  }

  //! Requires b.value() != 0.
  friend constexpr Jet operator/(const Jet &a, const Jet &b) {
    Jet r;
    const double inv = 1.0 / b.c_[0];
    for (int n = 0; n <= K; ++n) {
      double acc = a.c_[n];
      for (int i = 1; i <= n; ++i)
        acc -= b.c_[i] * r.c_[n - i];
      r.c_[n] = acc * inv;
    }
    return r;
  }

private:
  std::array<double, K + 1> c_;
};

//! Scalar overloads so kernel templates can be instantiated with double.
inline double jet_value(double x) { return x; }
template <int K> double jet_value(const Jet<K> &x) { return x.value(); }

//! x^p for p >= 0 by repeated squaring.
template <class T> T integer_power(T x, int p) {
  T result(1.0);
  while (p > 0) {
    if (p & 1)
      result = result * x;
    p >>= 1;
    if (p > 0)
      x = x * x;
  }
  return result;
}

} // namespace lshift
