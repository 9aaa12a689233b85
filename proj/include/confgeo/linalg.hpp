#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>

namespace confgeo {

using Complex = std::complex<double>;

/// Three components of a (possibly complex) vector in coordinate basis.
template <class T>
struct Vec3T {
  std::array<T, 3> c{};

  constexpr T& operator[](std::size_t i) { return c[i]; }
  constexpr const T& operator[](std::size_t i) const { return c[i]; }

  Vec3T& operator+=(const Vec3T& o) {
    for (int i = 0; i < 3; ++i) c[i] += o.c[i];
    return *this;
  }
  Vec3T& operator-=(const Vec3T& o) {
    for (int i = 0; i < 3; ++i) c[i] -= o.c[i];
    return *this;
  }
  template <class S>
  Vec3T& operator*=(const S& s) {
    for (int i = 0; i < 3; ++i) c[i] *= s;
    return *this;
  }
};

using Vec3 = Vec3T<double>;
using CVec3 = Vec3T<Complex>;

template <class T>
Vec3T<T> operator+(Vec3T<T> a, const Vec3T<T>& b) { return a += b; }
template <class T>
Vec3T<T> operator-(Vec3T<T> a, const Vec3T<T>& b) { return a -= b; }
template <class T>
Vec3T<T> operator-(const Vec3T<T>& a) { return {{-a[0], -a[1], -a[2]}}; }

inline Vec3 operator*(double s, const Vec3& v) { return {{s * v[0], s * v[1], s * v[2]}}; }
inline Vec3 operator*(const Vec3& v, double s) { return s * v; }
inline Vec3 operator/(const Vec3& v, double s) { return {{v[0] / s, v[1] / s, v[2] / s}}; }
inline CVec3 operator*(Complex s, const CVec3& v) { return {{s * v[0], s * v[1], s * v[2]}}; }
inline CVec3 operator*(const CVec3& v, Complex s) { return s * v; }
inline CVec3 operator*(double s, const CVec3& v) { return Complex(s) * v; }
inline CVec3 operator*(Complex s, const Vec3& v) { return {{s * v[0], s * v[1], s * v[2]}}; }
inline CVec3 operator/(const CVec3& v, Complex s) { return {{v[0] / s, v[1] / s, v[2] / s}}; }

inline CVec3 complexify(const Vec3& v) { return {{v[0], v[1], v[2]}}; }
inline CVec3 make_complex(const Vec3& re, const Vec3& im) {
  return {{Complex(re[0], im[0]), Complex(re[1], im[1]), Complex(re[2], im[2])}};
}
inline Vec3 real(const CVec3& v) { return {{v[0].real(), v[1].real(), v[2].real()}}; }
inline Vec3 imag(const CVec3& v) { return {{v[0].imag(), v[1].imag(), v[2].imag()}}; }
inline CVec3 conj(const CVec3& v) { return {{std::conj(v[0]), std::conj(v[1]), std::conj(v[2])}}; }

/// Plain coordinate sum a^i b^i (no metric, no conjugation).
template <class A, class B>
auto coord_dot(const Vec3T<A>& a, const Vec3T<B>& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

inline double coord_norm(const Vec3& v) { return std::sqrt(coord_dot(v, v)); }

inline double max_abs(const Vec3& v) {
  return std::max({std::abs(v[0]), std::abs(v[1]), std::abs(v[2])});
}
inline double max_abs(const CVec3& v) {
  return std::max({std::abs(v[0]), std::abs(v[1]), std::abs(v[2])});
}

/// Row-major 3x3 matrix.
template <class T>
struct Mat3T {
  std::array<std::array<T, 3>, 3> m{};

  constexpr T& operator()(std::size_t i, std::size_t j) { return m[i][j]; }
  constexpr const T& operator()(std::size_t i, std::size_t j) const { return m[i][j]; }

  static Mat3T identity() {
    Mat3T r;
    for (int i = 0; i < 3; ++i) r.m[i][i] = T(1);
    return r;
  }

  Mat3T& operator+=(const Mat3T& o) {
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) m[i][j] += o.m[i][j];
    return *this;
  }
  Mat3T& operator-=(const Mat3T& o) {
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) m[i][j] -= o.m[i][j];
    return *this;
  }
  template <class S>
  Mat3T& operator*=(const S& s) {
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) m[i][j] *= s;
    return *this;
  }
};

using Mat3 = Mat3T<double>;

template <class T>
Mat3T<T> operator+(Mat3T<T> a, const Mat3T<T>& b) { return a += b; }
template <class T>
Mat3T<T> operator-(Mat3T<T> a, const Mat3T<T>& b) { return a -= b; }
inline Mat3 operator*(double s, Mat3 a) { return a *= s; }

inline Mat3 operator*(const Mat3& a, const Mat3& b) {
  Mat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) r(i, j) += a(i, k) * b(k, j);
  return r;
}

template <class T>
Vec3T<T> operator*(const Mat3& a, const Vec3T<T>& v) {
  Vec3T<T> r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r[i] += a(i, j) * v[j];
  return r;
}

inline Mat3 transpose(const Mat3& a) {
  Mat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r(i, j) = a(j, i);
  return r;
}

inline double det(const Mat3& a) {
  return a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) -
         a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0)) +
         a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
}

inline Mat3 inverse(const Mat3& a) {
  const double d = det(a);
  Mat3 r;
  r(0, 0) = (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) / d;
  r(0, 1) = (a(0, 2) * a(2, 1) - a(0, 1) * a(2, 2)) / d;
  r(0, 2) = (a(0, 1) * a(1, 2) - a(0, 2) * a(1, 1)) / d;
  r(1, 0) = (a(1, 2) * a(2, 0) - a(1, 0) * a(2, 2)) / d;
  r(1, 1) = (a(0, 0) * a(2, 2) - a(0, 2) * a(2, 0)) / d;
  r(1, 2) = (a(0, 2) * a(1, 0) - a(0, 0) * a(1, 2)) / d;
  r(2, 0) = (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0)) / d;
  r(2, 1) = (a(0, 1) * a(2, 0) - a(0, 0) * a(2, 1)) / d;
  r(2, 2) = (a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0)) / d;
  return r;
}

inline double max_abs(const Mat3& a) {
  double r = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r = std::max(r, std::abs(a(i, j)));
  return r;
}

/// a_{ij} X^i Y^j, complex-bilinear in (X, Y). Every metric and 2-tensor
/// contraction in the library goes through this one routine; conjugation is
/// always explicit at the call site.
template <class A, class B>
auto contract(const Mat3& a, const Vec3T<A>& x, const Vec3T<B>& y) {
  decltype(x[0] * y[0]) r{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r += a(i, j) * x[i] * y[j];
  return r;
}

/// Cholesky test for positive definiteness of a symmetric matrix.
inline bool is_positive_definite(const Mat3& a) {
  double l[3][3] = {};
  for (int j = 0; j < 3; ++j) {
    double s = a(j, j);
    for (int k = 0; k < j; ++k) s -= l[j][k] * l[j][k];
    if (!(s > 0.0)) return false;
    l[j][j] = std::sqrt(s);
    for (int i = j + 1; i < 3; ++i) {
      double t = a(i, j);
      for (int k = 0; k < j; ++k) t -= l[i][k] * l[j][k];
      l[i][j] = t / l[j][j];
    }
  }
  return true;
}

/// Flat rank-3 array T[i][j][k].
struct Tensor3 {
  std::array<double, 27> v{};
  double& operator()(int i, int j, int k) { return v[9 * i + 3 * j + k]; }
  double operator()(int i, int j, int k) const { return v[9 * i + 3 * j + k]; }
};

/// Flat rank-4 array T[i][j][k][l].
struct Tensor4 {
  std::array<double, 81> v{};
  double& operator()(int i, int j, int k, int l) { return v[27 * i + 9 * j + 3 * k + l]; }
  double operator()(int i, int j, int k, int l) const { return v[27 * i + 9 * j + 3 * k + l]; }
};

}  // namespace confgeo
