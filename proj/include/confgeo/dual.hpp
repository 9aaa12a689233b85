#pragma once

#include <cmath>

namespace confgeo {

// Forward-mode dual number a + b*eps with eps^2 = 0. Nesting
// Dual<Dual<Dual<double>>> yields exact mixed third partials; the builtin
// metric registry is written once as templates over the scalar type and
// differentiated this way.
template <class T>
struct Dual {
  T re{};
  T eps{};

  Dual() = default;
  Dual(double v) : re(v), eps() {}  // NOLINT: implicit promotion of constants
  Dual(T r, T e) : re(r), eps(e) {}

  Dual& operator+=(const Dual& o) { re += o.re; eps += o.eps; return *this; }
  Dual& operator-=(const Dual& o) { re -= o.re; eps -= o.eps; return *this; }
  Dual& operator*=(const Dual& o) {
    eps = eps * o.re + re * o.eps;
    re = re * o.re;
    return *this;
  }
  Dual& operator/=(const Dual& o) {
    const T inv = T(1.0) / o.re;
    eps = (eps - re * o.eps * inv) * inv;
    re = re * inv;
    return *this;
  }
};

template <class T> Dual<T> operator+(Dual<T> a, const Dual<T>& b) { return a += b; }
template <class T> Dual<T> operator-(Dual<T> a, const Dual<T>& b) { return a -= b; }
template <class T> Dual<T> operator*(Dual<T> a, const Dual<T>& b) { return a *= b; }
template <class T> Dual<T> operator/(Dual<T> a, const Dual<T>& b) { return a /= b; }
template <class T> Dual<T> operator-(const Dual<T>& a) { return {-a.re, -a.eps}; }

template <class T> Dual<T> operator+(Dual<T> a, double s) { a.re += s; return a; }
template <class T> Dual<T> operator+(double s, Dual<T> a) { a.re += s; return a; }
template <class T> Dual<T> operator-(Dual<T> a, double s) { a.re -= s; return a; }
template <class T> Dual<T> operator-(double s, const Dual<T>& a) { return {s - a.re, -a.eps}; }
template <class T> Dual<T> operator*(const Dual<T>& a, double s) { return {a.re * s, a.eps * s}; }
template <class T> Dual<T> operator*(double s, const Dual<T>& a) { return {a.re * s, a.eps * s}; }
template <class T> Dual<T> operator/(const Dual<T>& a, double s) { return {a.re / s, a.eps / s}; }
template <class T> Dual<T> operator/(double s, const Dual<T>& a) { return Dual<T>(s) / a; }

template <class T>
Dual<T> exp(const Dual<T>& a) {
  using std::exp;
  const T e = exp(a.re);
  return {e, e * a.eps};
}

template <class T>
Dual<T> log(const Dual<T>& a) {
  using std::log;
  return {log(a.re), a.eps / a.re};
}

template <class T>
Dual<T> sin(const Dual<T>& a) {
  using std::cos;
  using std::sin;
  return {sin(a.re), cos(a.re) * a.eps};
}

template <class T>
Dual<T> cos(const Dual<T>& a) {
  using std::cos;
  using std::sin;
  return {cos(a.re), -(sin(a.re) * a.eps)};
}

template <class T>
Dual<T> sqrt(const Dual<T>& a) {
  using std::sqrt;
  const T s = sqrt(a.re);
  return {s, a.eps / (2.0 * s)};
}

/// Value part, recursively stripped down to double.
inline double value_of(double v) { return v; }
template <class T>
double value_of(const Dual<T>& d) { return value_of(d.re); }

}  // namespace confgeo
