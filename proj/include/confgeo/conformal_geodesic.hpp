#pragma once

#include <cmath>
#include <string>

#include "confgeo/curve.hpp"

namespace confgeo {

/// Jerk ∇_ẋ∇_ẋ ẋ prescribed by the conformally invariant third-order equation:
///   j = (3g(ẋ,a)/|ẋ|²) a − (3|a|²/2|ẋ|²) ẋ − 2P(ẋ,ẋ) ẋ + |ẋ|² P(ẋ)
inline Vec3 cg_rhs(const PointGeometry& pg, const CurveState& s) {
  const double v2 = pg.inner(s.v, s.v);
  if (!(v2 > 0.0)) throw InputError("conformal geodesic equation needs nonzero velocity");
  const double va = pg.inner(s.v, s.a);
  const double a2 = pg.inner(s.a, s.a);
  const double pvv = contract(pg.schouten, s.v, s.v);
  return (3.0 * va / v2) * s.a - (1.5 * a2 / v2 + 2.0 * pvv) * s.v + v2 * pg.schouten_raised(s.v);
}

inline Vec3 cg_rhs(const MetricChart& chart, const CurveState& s) {
  return cg_rhs(point_geometry(chart, s.x), s);
}

/// ẋ × (j − (3g(ẋ,a)/|ẋ|²) a − |ẋ|² P(ẋ)); vanishes exactly when the
/// unparametrized conformal geodesic equation holds at this sample.
inline Vec3 unparam_residual(const PointGeometry& pg, const CurveState& s, const Vec3& jerk) {
  const double v2 = pg.inner(s.v, s.v);
  if (!(v2 > 0.0)) throw InputError("residual needs nonzero velocity");
  const double va = pg.inner(s.v, s.a);
  return pg.cross(s.v, jerk - (3.0 * va / v2) * s.a - v2 * pg.schouten_raised(s.v));
}

inline Vec3 unparam_residual(const MetricChart& chart, const CurveState& s, const Vec3& jerk) {
  return unparam_residual(point_geometry(chart, s.x), s, jerk);
}

struct CgOptions {
  double step = 1e-3;
  double min_speed = 1e-8;
};

namespace detail {

struct CgDerivative {
  Vec3 x, v, a;
};

inline CgDerivative cg_flow(const MetricChart& chart, const CurveState& s) {
  const PointGeometry pg = point_geometry(chart, s.x);
  const Vec3 j = cg_rhs(pg, s);
  return {s.v, s.a - pg.gamma_contract(s.v, s.v), j - pg.gamma_contract(s.v, s.a)};
}

inline CurveState advance(const CurveState& s, const CgDerivative& d, double h) {
  return {s.x + h * d.x, s.v + h * d.v, s.a + h * d.a};
}

}  // namespace detail

/// Fixed-step RK4 on the covariant first-order system
///   ẋ = v,  v̇ = a − Γ(v, v),  ȧ = j − Γ(v, a)
/// over [t0, t1]. The step is shrunk slightly so that it divides the span.
/// Leaving the chart or |v| < min_speed truncates the curve and sets `status`.
inline DiscreteCurve integrate_cg(const MetricChart& chart, const CurveState& initial, double t0,
                                  double t1, const CgOptions& opt = {}) {
  if (!(opt.step > 0.0) || !(t1 > t0)) throw InputError("integration needs t1 > t0 and a positive step");
  const PointGeometry pg0 = point_geometry(chart, initial.x);
  if (!(pg0.norm(initial.v) >= opt.min_speed)) throw InputError("initial velocity is zero");
  const long n = std::max(1L, std::lround((t1 - t0) / opt.step));
  const double h = (t1 - t0) / static_cast<double>(n);

  DiscreteCurve c;
  c.t.reserve(n + 1);
  c.s.reserve(n + 1);
  c.jerk.reserve(n + 1);
  c.t.push_back(t0);
  c.s.push_back(initial);
  c.jerk.push_back(cg_rhs(pg0, initial));
  CurveState s = initial;
  for (long i = 0; i < n; ++i) {
    try {
      const auto k1 = detail::cg_flow(chart, s);
      const auto k2 = detail::cg_flow(chart, detail::advance(s, k1, 0.5 * h));
      const auto k3 = detail::cg_flow(chart, detail::advance(s, k2, 0.5 * h));
      const auto k4 = detail::cg_flow(chart, detail::advance(s, k3, h));
      s.x += (h / 6.0) * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x);
      s.v += (h / 6.0) * (k1.v + 2.0 * k2.v + 2.0 * k3.v + k4.v);
      s.a += (h / 6.0) * (k1.a + 2.0 * k2.a + 2.0 * k3.a + k4.a);
      const PointGeometry pg = point_geometry(chart, s.x);
      if (!(pg.norm(s.v) >= opt.min_speed)) {
        c.status = CurveStatus::velocity_collapse;
        c.message = "velocity collapsed at t = " + std::to_string(t0 + (i + 1) * h);
        break;
      }
      c.t.push_back(t0 + static_cast<double>(i + 1) * h);
      c.s.push_back(s);
      c.jerk.push_back(cg_rhs(pg, s));
    } catch (const DomainError& e) {
      c.status = CurveStatus::left_domain;
      c.message = e.what();
      break;
    }
  }
  return c;
}

struct GeodesicCheck {
  bool passed = false;
  double max_residual = 0.0;
  std::size_t worst_index = 0;
};

/// Applies the unparametrized equation at every sample with a jerk taken by
/// fourth-order differences of the stored accelerations; two samples at each
/// end are excluded. The residual is divided by |ẋ|⁴, which makes it
/// invariant under affine changes of parameter.
inline GeodesicCheck is_conformal_geodesic(const MetricChart& chart, const DiscreteCurve& curve,
                                           double tol) {
  if (curve.size() < 7) throw InputError("geodesic check needs at least seven samples");
  DiscreteCurve c = curve;
  c.jerk.clear();
  ensure_jerk(chart, c);
  GeodesicCheck r;
  for (std::size_t i = 2; i + 2 < c.size(); ++i) {
    const PointGeometry pg = point_geometry(chart, c.s[i].x);
    const double v2 = pg.inner(c.s[i].v, c.s[i].v);
    const Vec3 res = unparam_residual(pg, c.s[i], c.jerk[i]);
    const double m = pg.norm(res) / (v2 * v2);
    if (m > r.max_residual) {
      r.max_residual = m;
      r.worst_index = i;
    }
  }
  r.passed = r.max_residual < tol;
  return r;
}

}  // namespace confgeo
