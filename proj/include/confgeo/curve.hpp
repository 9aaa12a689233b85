#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "confgeo/dual.hpp"
#include "confgeo/errors.hpp"
#include "confgeo/tensors.hpp"

namespace confgeo {

/// Position, velocity ẋ and covariant acceleration ∇_ẋ ẋ.
struct CurveState {
  Vec3 x{};
  Vec3 v{};
  Vec3 a{};
};

enum class CurveStatus { complete, left_domain, velocity_collapse, constraint_drift };

inline const char* to_string(CurveStatus s) {
  switch (s) {
    case CurveStatus::complete: return "complete";
    case CurveStatus::left_domain: return "left_domain";
    case CurveStatus::velocity_collapse: return "velocity_collapse";
    case CurveStatus::constraint_drift: return "constraint_drift";
  }
  return "unknown";
}

/// Samples of a curve on a strictly increasing parameter grid. `jerk` holds
/// ∇_ẋ∇_ẋ ẋ per sample when it is known exactly; it is empty otherwise.
struct DiscreteCurve {
  std::vector<double> t;
  std::vector<CurveState> s;
  std::vector<Vec3> jerk;
  CurveStatus status = CurveStatus::complete;
  std::string message;

  std::size_t size() const { return t.size(); }
  bool has_jerk() const { return jerk.size() == t.size() && !t.empty(); }

  std::vector<Vec3> points() const {
    std::vector<Vec3> p;
    p.reserve(s.size());
    for (const auto& st : s) p.push_back(st.x);
    return p;
  }

  /// Grid spacing, or an InputError if the grid is not uniform.
  double uniform_step() const {
    if (t.size() < 2) throw InputError("curve needs at least two samples");
    const double h = (t.back() - t.front()) / static_cast<double>(t.size() - 1);
    for (std::size_t i = 1; i < t.size(); ++i) {
      const double d = t[i] - t[i - 1];
      if (!(d > 0)) throw InputError("curve parameter is not strictly increasing");
      if (std::abs(d - h) > 1e-9 * std::abs(h)) throw InputError("curve parameter grid is not uniform");
    }
    return h;
  }
};

/// Checks the DiscreteCurve invariants: increasing t and every point inside the chart.
inline void validate_curve(const MetricChart& chart, const DiscreteCurve& c) {
  if (c.t.size() != c.s.size()) throw InputError("curve has mismatched sample arrays");
  for (std::size_t i = 1; i < c.t.size(); ++i)
    if (!(c.t[i] > c.t[i - 1])) throw InputError("curve parameter is not strictly increasing");
  for (const auto& st : c.s) chart.require_inside(st.x);
}

/// Coordinate derivatives of a parametrized curve up to third order.
struct CurveJet {
  Vec3 x, xd, xdd, xddd;
};

/// x(t) with its first three coordinate derivatives.
using ParametricCurve = std::function<CurveJet(double)>;

/// Wraps a functor `template <class S> Vec3T<S> operator()(S t) const` whose
/// derivatives are taken exactly with nested duals.
template <class F>
ParametricCurve make_parametric(F f) {
  return [f](double t) {
    using D1 = Dual<double>;
    using D2 = Dual<D1>;
    using D3 = Dual<D2>;
    const D3 s(D2(D1(t, 1.0), D1(1.0, 0.0)), D2(D1(1.0, 0.0), D1(0.0, 0.0)));
    const Vec3T<D3> y = f(s);
    CurveJet j;
    for (int i = 0; i < 3; ++i) {
      j.x[i] = y[i].re.re.re;
      j.xd[i] = y[i].re.re.eps;
      j.xdd[i] = y[i].eps.eps.re;
      j.xddd[i] = y[i].eps.eps.eps;
    }
    return j;
  };
}

namespace curves {

/// (r cos t, r sin t, 0) + center
struct Circle {
  double r = 1.0;
  Vec3 center{};
  template <class S>
  Vec3T<S> operator()(S t) const {
    using std::cos;
    using std::sin;
    return {{center[0] + r * cos(t), center[1] + r * sin(t), S(center[2])}};
  }
};

/// (a cos t, a sin t, c t)
struct Helix {
  double a = 1.0;
  double c = 1.0;
  template <class S>
  Vec3T<S> operator()(S t) const {
    using std::cos;
    using std::sin;
    return {{a * cos(t), a * sin(t), c * t}};
  }
};

/// p + t d
struct Line {
  Vec3 p{};
  Vec3 d{{1.0, 0.0, 0.0}};
  template <class S>
  Vec3T<S> operator()(S t) const {
    return {{p[0] + d[0] * t, p[1] + d[1] * t, p[2] + d[2] * t}};
  }
};

/// (t, t², t³)
struct TwistedCubic {
  template <class S>
  Vec3T<S> operator()(S t) const {
    return {{t, t * t, t * t * t}};
  }
};

/// x0 + t d + Σ_m (A_m sin(m t) + B_m cos(m t) − B_m), m = 1..3
struct Trigonometric {
  Vec3 x0{};
  Vec3 d{{1.0, 0.0, 0.0}};
  std::array<Vec3, 3> A{};
  std::array<Vec3, 3> B{};
  template <class S>
  Vec3T<S> operator()(S t) const {
    using std::cos;
    using std::sin;
    Vec3T<S> r;
    for (int i = 0; i < 3; ++i) {
      r[i] = x0[i] + d[i] * t;
      for (int m = 0; m < 3; ++m) {
        const S mt = (m + 1.0) * t;
        r[i] = r[i] + A[m][i] * sin(mt) + B[m][i] * (cos(mt) - 1.0);
      }
    }
    return r;
  }
};

}  // namespace curves

/// Covariant velocity, acceleration and jerk from coordinate derivatives:
/// a = ẍ + Γ(ẋ, ẋ),  j = ȧ + Γ(ẋ, a) with ȧ = x⃛ + ∂Γ(ẋ)(ẋ, ẋ) + 2Γ(ẍ, ẋ).
inline void covariant_derivatives(const MetricChart& chart, const CurveJet& cj, CurveState& st,
                                  Vec3& jerk) {
  const detail::ConnectionJet c = detail::connection_jet(chart.jet(cj.x, 2));
  st.x = cj.x;
  st.v = cj.xd;
  Vec3 a = cj.xdd, adot = cj.xddd;
  for (int k = 0; k < 3; ++k)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        a[k] += c.gamma(i, j, k) * cj.xd[i] * cj.xd[j];
        adot[k] += 2.0 * c.gamma(i, j, k) * cj.xdd[i] * cj.xd[j];
        for (int m = 0; m < 3; ++m) adot[k] += c.dgamma[m](i, j, k) * cj.xd[m] * cj.xd[i] * cj.xd[j];
      }
  st.a = a;
  jerk = adot;
  for (int k = 0; k < 3; ++k)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) jerk[k] += c.gamma(i, j, k) * cj.xd[i] * a[j];
}

/// Samples a parametrized curve on n uniform intervals of [t0, t1], with exact
/// covariant data.
inline DiscreteCurve sample_curve(const MetricChart& chart, const ParametricCurve& f, double t0,
                                  double t1, int n) {
  if (n < 1) throw InputError("need at least one interval");
  DiscreteCurve c;
  c.t.resize(n + 1);
  c.s.resize(n + 1);
  c.jerk.resize(n + 1);
  for (int i = 0; i <= n; ++i) {
    c.t[i] = t0 + (t1 - t0) * static_cast<double>(i) / n;
    covariant_derivatives(chart, f(c.t[i]), c.s[i], c.jerk[i]);
  }
  return c;
}

/// Coordinate acceleration ẍ = a − Γ(ẋ, ẋ) of a sample.
inline Vec3 coordinate_acceleration(const PointGeometry& pg, const CurveState& s) {
  return s.a - pg.gamma_contract(s.v, s.v);
}

namespace detail {

// Fourth-order first-derivative stencil on a uniform grid; one-sided near the ends.
template <class V>
V stencil_derivative(const std::vector<V>& f, std::size_t i, double h) {
  const std::size_t n = f.size();
  if (n < 5) throw InputError("derivative stencil needs at least five samples");
  if (i >= 2 && i + 2 < n)
    return (1.0 / (12.0 * h)) * (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]);
  if (i < 2) {
    const std::size_t k = 0;
    const double c[5] = {-25.0, 48.0, -36.0, 16.0, -3.0};
    const double r[5] = {-3.0, -10.0, 18.0, -6.0, 1.0};  // offset 1
    const double* w = (i == 0) ? c : r;
    V s = w[0] * f[k];
    for (int m = 1; m < 5; ++m) s += w[m] * f[k + m];
    return (1.0 / (12.0 * h)) * s;
  }
  const std::size_t k = n - 5;
  const double c[5] = {3.0, -16.0, 36.0, -48.0, 25.0};
  const double r[5] = {-1.0, 6.0, -18.0, 10.0, 3.0};  // offset n−2
  const double* w = (i == n - 1) ? c : r;
  V s = w[0] * f[k];
  for (int m = 1; m < 5; ++m) s += w[m] * f[k + m];
  return (1.0 / (12.0 * h)) * s;
}

}  // namespace detail

/// Composite Simpson rule on a uniform grid with an even number of intervals;
/// an odd count uses the 3/8 rule on the last three intervals.
inline double simpson(const std::vector<double>& f, double h) {
  const std::size_t n = f.size() - 1;
  if (f.size() < 3) throw InputError("Simpson rule needs at least two intervals");
  auto even = [&](std::size_t end) {
    double s = f[0] + f[end];
    for (std::size_t i = 1; i < end; ++i) s += (i % 2 ? 4.0 : 2.0) * f[i];
    return s * h / 3.0;
  };
  if (n % 2 == 0) return even(n);
  if (n == 3) return 3.0 * h / 8.0 * (f[0] + 3 * f[1] + 3 * f[2] + f[3]);
  return even(n - 3) + 3.0 * h / 8.0 * (f[n - 3] + 3 * f[n - 2] + 3 * f[n - 1] + f[n]);
}

/// Fills `jerk` from the samples when it is missing: j = ȧ + Γ(ẋ, a) with ȧ
/// from the fourth-order stencil.
inline void ensure_jerk(const MetricChart& chart, DiscreteCurve& c) {
  if (c.has_jerk()) return;
  const double h = c.uniform_step();
  std::vector<Vec3> a;
  a.reserve(c.size());
  for (const auto& s : c.s) a.push_back(s.a);
  c.jerk.resize(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    const Tensor3 g = christoffel(chart, c.s[i].x);
    Vec3 j = detail::stencil_derivative(a, i, h);
    for (int k = 0; k < 3; ++k)
      for (int p = 0; p < 3; ++p)
        for (int q = 0; q < 3; ++q) j[k] += g(p, q, k) * c.s[i].v[p] * c.s[i].a[q];
    c.jerk[i] = j;
  }
}

}  // namespace confgeo
