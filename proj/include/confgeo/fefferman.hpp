#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "confgeo/conformal_geodesic.hpp"
#include "confgeo/curve.hpp"
#include "confgeo/tensors.hpp"

// Fefferman space over the twistor CR manifold, realized on the bundle of
// null vectors ζ with g(ζ, ζ) = 0, g(ζ, ζ̄) = 1. With η = iζ × ζ̄ the adapted
// components of a tangent vector γ̇ = (ẋ, ∇_ẋ ζ) are
//   γ̇⁰ = g(η, ẋ),  γ̇¹ = g(ζ, ẋ),  γ̇² = i g(η, ∇ζ),  γ̇³ = −i g(ζ̄, ∇ζ)
// and the inverse relations, valid on the constraint set, are
//   ẋ  = γ̇⁰ η + conj(γ̇¹) ζ + γ̇¹ ζ̄
//   ∇ζ = i γ̇³ ζ − i γ̇² η              (the η- and ζ̄-parts; g(ζ, ∇ζ) = 0)
//   ∇η = i (γ̇² ζ̄ − conj(γ̇²) ζ)
// These hold in any chart, so the null geodesic flow below is written with
// covariant derivatives and converted to coordinates with Γ.

namespace confgeo {

inline constexpr Complex I{0.0, 1.0};

struct NullCoframePoint {
  Vec3 x{};
  CVec3 zeta{};
};

struct ConeResiduals {
  double zeta_zeta = 0.0;  // |g(ζ, ζ)|
  double zeta_bar = 0.0;   // |g(ζ, ζ̄) − 1|
  double max() const { return std::max(zeta_zeta, zeta_bar); }
};

inline ConeResiduals cone_residuals(const PointGeometry& pg, const CVec3& zeta) {
  return {std::abs(pg.inner(zeta, zeta)), std::abs(pg.inner(zeta, conj(zeta)) - 1.0)};
}

/// η = iζ × ζ̄ = 2 Re ζ × Im ζ
inline Vec3 eta(const PointGeometry& pg, const CVec3& zeta) {
  return 2.0 * pg.cross(real(zeta), imag(zeta));
}

inline Vec3 eta(const MetricChart& chart, const NullCoframePoint& p) {
  return eta(point_geometry(chart, p.x), p.zeta);
}

/// ζ = e^{iφ}(e₁ + i e₂)/√2 for the oriented orthonormal completion
/// (e₁, e₂ = n × e₁, n) of a direction n, so that η = n/|n|.
inline CVec3 null_vector_along(const PointGeometry& pg, const Vec3& n, double phase = 0.0) {
  const double nn = pg.norm(n);
  if (!(nn > 0.0)) throw InputError("null vector needs a nonzero direction");
  const Vec3 u = n / nn;
  // least aligned coordinate axis, projected
  int best = 0;
  double best_c = 1e300;
  for (int k = 0; k < 3; ++k) {
    Vec3 e{};
    e[k] = 1.0;
    const double c = std::abs(pg.inner(e, u)) / pg.norm(e);
    if (c < best_c) best_c = c, best = k;
  }
  Vec3 e1{};
  e1[best] = 1.0;
  e1 = e1 - pg.inner(e1, u) * u;
  e1 = e1 / pg.norm(e1);
  const Vec3 e2 = pg.cross(u, e1);
  return (std::exp(I * phase) / std::sqrt(2.0)) * make_complex(e1, e2);
}

/// Symmetric (Löwdin) orthonormalization of (√2 Re ζ, √2 Im ζ) with respect
/// to g: the nearest point of the constraint set, so the phase of ζ moves as
/// little as possible. Returns the size of the correction max|G − 1|.
inline double renormalize(const PointGeometry& pg, CVec3& zeta) {
  const double r2 = std::sqrt(2.0);
  const Vec3 e1 = r2 * real(zeta), e2 = r2 * imag(zeta);
  const double a = pg.inner(e1, e1), b = pg.inner(e1, e2), d = pg.inner(e2, e2);
  const double drift = std::max({std::abs(a - 1.0), std::abs(b), std::abs(d - 1.0)});
  // G^{-1/2} for G = [[a, b], [b, d]] via sqrt(G) = (G + s 1)/t
  const double s = std::sqrt(a * d - b * b);
  const double t = std::sqrt(a + d + 2.0 * s);
  const double sa = (a + s) / t, sb = b / t, sd = (d + s) / t;
  const double det = sa * sd - sb * sb;
  const double ia = sd / det, ib = -sb / det, id = sa / det;
  const Vec3 f1 = ia * e1 + ib * e2;
  const Vec3 f2 = ib * e1 + id * e2;
  zeta = (1.0 / r2) * make_complex(f1, f2);
  return drift;
}

/// (γ̇⁰, γ̇¹, γ̇², γ̇³): the adapted components of a tangent vector of the
/// Fefferman space. γ̇⁰ and γ̇³ are real.
struct AdaptedComponents {
  double c0 = 0.0;
  Complex c1{};
  Complex u2{};
  double u3 = 0.0;
};

/// Components of (ẋ, ∇_ẋ ζ) at a constrained point.
inline AdaptedComponents adapted_components(const PointGeometry& pg, const CVec3& zeta, const Vec3& xdot,
                                            const CVec3& nabla_zeta, double tol = 1e-8) {
  const ConeResiduals r = cone_residuals(pg, zeta);
  if (r.max() > tol) throw InputError("ζ violates the null cone constraints g(ζ,ζ) = 0, g(ζ,ζ̄) = 1");
  const Vec3 e = eta(pg, zeta);
  AdaptedComponents c;
  c.c0 = pg.inner(e, xdot);
  c.c1 = pg.inner(zeta, xdot);
  c.u2 = I * pg.inner(nabla_zeta, e);
  c.u3 = (-I * pg.inner(nabla_zeta, conj(zeta))).real();
  return c;
}

inline AdaptedComponents adapted_components(const MetricChart& chart, const NullCoframePoint& p,
                                            const Vec3& xdot, const CVec3& nabla_zeta, double tol = 1e-8) {
  return adapted_components(point_geometry(chart, p.x), p.zeta, xdot, nabla_zeta, tol);
}

/// ẋ = γ̇⁰ η + conj(γ̇¹) ζ + γ̇¹ ζ̄
inline Vec3 reconstruct_velocity(const PointGeometry& pg, const CVec3& zeta, double c0, Complex c1) {
  return c0 * eta(pg, zeta) + 2.0 * real(std::conj(c1) * zeta);
}

/// ∇ζ = iγ̇³ ζ − iγ̇² η
inline CVec3 reconstruct_nabla_zeta(const PointGeometry& pg, const CVec3& zeta, Complex u2, double u3) {
  return (I * u3) * zeta - (I * u2) * complexify(eta(pg, zeta));
}

/// g^F(U, V) = 2 Re(U¹ conj(V²) + V¹ conj(U²)) + U⁰V³ + V⁰U³
inline double fefferman_inner(const AdaptedComponents& u, const AdaptedComponents& v) {
  return 2.0 * (u.c1 * std::conj(v.u2) + v.c1 * std::conj(u.u2)).real() + u.c0 * v.u3 + v.c0 * u.u3;
}

/// g^F(γ̇, γ̇) = 4 Re(γ̇¹ conj(γ̇²)) + 2 γ̇⁰ γ̇³
inline double nullity(const AdaptedComponents& c) { return fefferman_inner(c, c); }

/// State of a null geodesic: the point (x, ζ), the evolving components
/// u2 = γ̇², u3 = γ̇³ and the conserved c0 = γ̇⁰, c1 = γ̇¹.
struct NullFrameState {
  NullCoframePoint point;
  Complex u2{};
  double u3 = 0.0;
  double c0 = 0.0;
  Complex c1{};

  AdaptedComponents components() const { return {c0, c1, u2, u3}; }
};

/// Time derivative of a NullFrameState. `zeta` is the coordinate derivative
/// dζ/dt; `nabla_zeta` is ∇_ẋ ζ.
struct NullFrameDerivative {
  Vec3 x{};
  CVec3 zeta{};
  CVec3 nabla_zeta{};
  Complex u2{};
  double u3 = 0.0;
};

/// P evaluated on (ζ, ζ̄, η); complex-bilinear.
struct SchoutenOnFrame {
  Complex ze, zz, zzb, zbe, zbzb;
  double ee;
};

inline SchoutenOnFrame schouten_on_frame(const Mat3& P, const CVec3& zeta, const Vec3& e) {
  const CVec3 zb = conj(zeta);
  const CVec3 ec = complexify(e);
  return {contract(P, zeta, ec), contract(P, zeta, zeta), contract(P, zeta, zb),
          contract(P, zb, ec),   contract(P, zb, zb),     contract(P, e, e)};
}

/// The null geodesic equations of g^F:
///   u̇2 = −i[P(ζ,η)c0² + (P(ζ,ζ̄) − P(η,η))c0c1 + P(ζ,ζ)c0 c̄1 − P(ζ̄,η)c1² − P(ζ,η)|c1|²]
///   u̇3 = −i[P(ζ̄,η)c0c1 − P(ζ,η)c0 c̄1 + P(ζ̄,ζ̄)c1² − P(ζ,ζ)c̄1²]
/// with c0, c1 constant and (x, ζ) moving by the reconstruction identities.
inline NullFrameDerivative null_geodesic_rhs(const PointGeometry& pg, const NullFrameState& s) {
  const CVec3& z = s.point.zeta;
  const Vec3 e = eta(pg, z);
  const SchoutenOnFrame p = schouten_on_frame(pg.schouten, z, e);
  const double c0 = s.c0;
  const Complex c1 = s.c1, c1b = std::conj(s.c1);
  NullFrameDerivative d;
  d.x = c0 * e + 2.0 * real(c1b * z);
  d.nabla_zeta = (I * s.u3) * z - (I * s.u2) * complexify(e);
  d.zeta = d.nabla_zeta - pg.gamma_contract(d.x, z);
  d.u2 = -I * (p.ze * c0 * c0 + (p.zzb - p.ee) * c0 * c1 + p.zz * c0 * c1b - p.zbe * c1 * c1 -
               p.ze * std::norm(c1));
  d.u3 = (-I * (p.zbe * c0 * c1 - p.ze * c0 * c1b + p.zbzb * c1 * c1 - p.zz * c1b * c1b)).real();
  return d;
}

inline NullFrameDerivative null_geodesic_rhs(const MetricChart& chart, const NullFrameState& s) {
  return null_geodesic_rhs(point_geometry(chart, s.point.x), s);
}

/// Projection (x, ẋ, ∇ẋ, ∇∇ẋ) of a null geodesic state, computed from the
/// reconstruction identities and the geodesic equations (no differencing).
inline CurveState project(const PointGeometry& pg, const NullFrameState& s, Vec3* jerk = nullptr) {
  const CVec3& z = s.point.zeta;
  const CVec3 zb = conj(z);
  const CVec3 e = complexify(eta(pg, z));
  const Complex u2 = s.u2, u2b = std::conj(s.u2);
  const double u3 = s.u3;
  const Complex c1b = std::conj(s.c1);
  const CVec3 nz = (I * u3) * z - (I * u2) * e;
  const CVec3 nzb = conj(nz);
  const CVec3 ne = I * (u2 * zb - u2b * z);
  CurveState st;
  st.x = s.point.x;
  st.v = real(s.c0 * e + c1b * z + s.c1 * zb);
  st.a = real(s.c0 * ne + c1b * nz + s.c1 * nzb);
  if (jerk) {
    const NullFrameDerivative d = null_geodesic_rhs(pg, s);
    const Complex du2 = d.u2, du2b = std::conj(d.u2);
    const CVec3 nne = I * (du2 * zb + u2 * nzb - du2b * z - u2b * nz);
    const CVec3 nnz = (I * d.u3) * z + (I * u3) * nz - (I * du2) * e - (I * u2) * ne;
    *jerk = real(s.c0 * nne + c1b * nnz + s.c1 * conj(nnz));
  }
  return st;
}

struct NullGeodesicOptions {
  double step = 1e-3;
  double max_renormalization = 1e-4;  // per step
  double input_tolerance = 1e-8;      // constraint and nullity checks on the initial state
};

struct NullGeodesic {
  std::vector<double> t;
  std::vector<NullFrameState> states;
  CurveStatus status = CurveStatus::complete;
  std::string message;
  double max_renormalization = 0.0;
};

/// Rejects states off the constraint set or violating nullity.
inline void validate_null_state(const PointGeometry& pg, const NullFrameState& s, double tol = 1e-8) {
  const ConeResiduals r = cone_residuals(pg, s.point.zeta);
  if (r.max() > tol)
    throw InputError("initial ζ violates g(ζ,ζ) = 0 or g(ζ,ζ̄) = 1 (residual " + std::to_string(r.max()) + ")");
  const double n = nullity(s.components());
  const double scale = 1.0 + std::abs(s.c0) * std::abs(s.u3) + std::abs(s.c1) * std::abs(s.u2);
  if (std::abs(n) > tol * scale)
    throw InputError("initial state violates the nullity constraint 4 Re(c1 conj(u2)) + 2 c0 u3 = 0 (value " +
                     std::to_string(n) + ")");
}

namespace detail {

inline NullFrameState advance(const NullFrameState& s, const NullFrameDerivative& d, double h) {
  NullFrameState r = s;
  r.point.x += h * d.x;
  r.point.zeta += Complex(h) * d.zeta;
  r.u2 += h * d.u2;
  r.u3 += h * d.u3;
  return r;
}

}  // namespace detail

/// RK4 for the null geodesic equations with c0, c1 held fixed and ζ
/// renormalized onto the constraint set after every step.
inline NullGeodesic integrate_null_geodesic(const MetricChart& chart, const NullFrameState& initial, double t0,
                                            double t1, const NullGeodesicOptions& opt = {}) {
  if (!(opt.step > 0.0) || !(t1 > t0)) throw InputError("integration needs t1 > t0 and a positive step");
  validate_null_state(point_geometry(chart, initial.point.x), initial, opt.input_tolerance);
  const long n = std::max(1L, std::lround((t1 - t0) / opt.step));
  const double h = (t1 - t0) / static_cast<double>(n);
  NullGeodesic g;
  g.t.push_back(t0);
  g.states.push_back(initial);
  NullFrameState s = initial;
  for (long i = 0; i < n; ++i) {
    try {
      const auto f = [&](const NullFrameState& y) { return null_geodesic_rhs(chart, y); };
      const auto k1 = f(s);
      const auto k2 = f(detail::advance(s, k1, 0.5 * h));
      const auto k3 = f(detail::advance(s, k2, 0.5 * h));
      const auto k4 = f(detail::advance(s, k3, h));
      s.point.x += (h / 6.0) * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x);
      s.point.zeta += Complex(h / 6.0) * (k1.zeta + 2.0 * k2.zeta + 2.0 * k3.zeta + k4.zeta);
      s.u2 += (h / 6.0) * (k1.u2 + 2.0 * k2.u2 + 2.0 * k3.u2 + k4.u2);
      s.u3 += (h / 6.0) * (k1.u3 + 2.0 * k2.u3 + 2.0 * k3.u3 + k4.u3);
      const double corr = renormalize(point_geometry(chart, s.point.x), s.point.zeta);
      g.max_renormalization = std::max(g.max_renormalization, corr);
      if (corr > opt.max_renormalization) {
        g.status = CurveStatus::constraint_drift;
        g.message = "renormalization correction " + std::to_string(corr) + " exceeds the per-step limit";
        break;
      }
    } catch (const DomainError& e) {
      g.status = CurveStatus::left_domain;
      g.message = e.what();
      break;
    }
    g.t.push_back(t0 + static_cast<double>(i + 1) * h);
    g.states.push_back(s);
  }
  return g;
}

/// Base curve of a null geodesic as a DiscreteCurve with exact jerk.
inline DiscreteCurve projected_curve(const MetricChart& chart, const NullGeodesic& g) {
  DiscreteCurve c;
  c.status = g.status;
  c.message = g.message;
  for (std::size_t i = 0; i < g.states.size(); ++i) {
    Vec3 j;
    c.t.push_back(g.t[i]);
    c.s.push_back(project(point_geometry(chart, g.states[i].point.x), g.states[i], &j));
    c.jerk.push_back(j);
  }
  return c;
}

/// Lift of a regular curve to the Fefferman space with η = ẋ/|ẋ|, c0 = 1,
/// c1 = 0, u3 = 0 and ζ transported by the normal connection. The states are
/// on every other sample of the curve (the transport uses RK4 with step 2h).
struct ChainLift {
  std::vector<std::size_t> index;  // sample index in the source curve
  std::vector<double> t;
  std::vector<NullFrameState> states;
  double max_residual = 0.0;
  std::size_t worst_index = 0;
};

namespace detail {

// ∇_ẋ T for T = ẋ/|ẋ|
inline Vec3 nabla_unit_tangent(const PointGeometry& pg, const CurveState& s) {
  const double sp = pg.norm(s.v);
  const Vec3 T = s.v / sp;
  return (s.a - pg.inner(s.a, T) * T) / sp;
}

// normal transport ∇_ẋ ν = −g(ν, ∇_ẋ T) T, in coordinates
template <class V>
V normal_transport_rhs(const PointGeometry& pg, const CurveState& s, const V& nu) {
  const Vec3 T = s.v / pg.norm(s.v);
  const Vec3 dT = nabla_unit_tangent(pg, s);
  V r = pg.gamma_contract(s.v, nu);
  r = -1.0 * r;
  const auto c = pg.inner(nu, dT);
  for (int k = 0; k < 3; ++k) r[k] -= c * T[k];
  return r;
}

inline void require_transport_grid(const DiscreteCurve& c) {
  c.uniform_step();
  if ((c.size() - 1) % 2 != 0) throw InputError("transport needs an even number of curve intervals");
  if (c.size() < 11) throw InputError("transport needs at least ten curve intervals");
}

}  // namespace detail

inline ChainLift canonical_chain_lift(const MetricChart& chart, const DiscreteCurve& curve, double phase = 0.0) {
  detail::require_transport_grid(curve);
  const double h = curve.uniform_step();
  std::vector<PointGeometry> pgs;
  pgs.reserve(curve.size());
  for (const auto& s : curve.s) {
    pgs.push_back(point_geometry(chart, s.x));
    if (!(pgs.back().norm(s.v) > 1e-8)) throw InputError("chain lift needs a regular curve");
  }
  ChainLift lift;
  CVec3 z = null_vector_along(pgs[0], curve.s[0].v, phase);
  auto make_state = [&](std::size_t i, const CVec3& zeta) {
    const PointGeometry& pg = pgs[i];
    const double sp = pg.norm(curve.s[i].v);
    const Vec3 k = detail::nabla_unit_tangent(pg, curve.s[i]) / sp;  // ∇_T T
    NullFrameState st;
    st.point = {curve.s[i].x, zeta};
    st.c0 = 1.0;
    st.u2 = -I * pg.inner(zeta, k);
    return st;
  };
  for (std::size_t i = 0;; i += 2) {
    lift.index.push_back(i);
    lift.t.push_back(curve.t[i]);
    lift.states.push_back(make_state(i, z));
    if (i + 2 >= curve.size()) break;
    const auto f = [&](std::size_t j, const CVec3& y) { return detail::normal_transport_rhs(pgs[j], curve.s[j], y); };
    const double H = 2.0 * h;
    const CVec3 k1 = f(i, z);
    const CVec3 k2 = f(i + 1, z + Complex(0.5 * H) * k1);
    const CVec3 k3 = f(i + 1, z + Complex(0.5 * H) * k2);
    const CVec3 k4 = f(i + 2, z + Complex(H) * k3);
    z += Complex(H / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    const PointGeometry& pg = pgs[i + 2];
    const Vec3 T = curve.s[i + 2].v / pg.norm(curve.s[i + 2].v);
    z = z - pg.inner(z, T) * complexify(T);
    renormalize(pg, z);
  }
  // residual of the null geodesic equations in the arclength parameter
  const std::size_t m = lift.states.size();
  std::vector<Complex> u2(m);
  std::vector<CVec3> zs(m);
  std::vector<Vec3> xs(m);
  for (std::size_t k = 0; k < m; ++k) {
    u2[k] = lift.states[k].u2;
    zs[k] = lift.states[k].point.zeta;
    xs[k] = lift.states[k].point.x;
  }
  for (std::size_t k = 2; k + 2 < m; ++k) {
    const std::size_t i = lift.index[k];
    const PointGeometry& pg = pgs[i];
    const double sp = pg.norm(curve.s[i].v);
    const NullFrameDerivative d = null_geodesic_rhs(pg, lift.states[k]);
    const double r = std::max({std::abs(detail::stencil_derivative(u2, k, 2 * h) / sp - d.u2), std::abs(d.u3),
                               max_abs(detail::stencil_derivative(zs, k, 2 * h) / Complex(sp) - d.zeta),
                               max_abs(detail::stencil_derivative(xs, k, 2 * h) / sp - d.x)});
    if (r > lift.max_residual) {
      lift.max_residual = r;
      lift.worst_index = i;
    }
  }
  return lift;
}

/// Curvature of g^F at a point of the Fefferman space, from P and *C of g.
/// Indices of the adapted coframe are ordered (0, 1, 2, 1̄, 2̄, 3).
struct FeffermanCurvatureReport {
  Complex ricci_00, ricci_01, ricci_22b, ricci_11, ricci_11b, ricci_33;
  Complex scalar;
  Complex weyl_0101b, weyl_01b01b, weyl_01b11b, weyl_11b11b;
  // max deviation of the contracted full table from the Ricci and Weyl entries
  double ricci_consistency = 0.0;
  double weyl_consistency = 0.0;
};

namespace fidx {
inline constexpr int k0 = 0, k1 = 1, k2 = 2, k1b = 3, k2b = 4, k3 = 5;
inline constexpr int bar(int a) {
  constexpr int b[6] = {0, 3, 4, 1, 2, 5};
  return b[a];
}
}  // namespace fidx

using FeffermanRiemann = std::array<Complex, 1296>;
using FeffermanMatrix = std::array<std::array<Complex, 6>, 6>;

inline Complex& fref(FeffermanRiemann& r, int a, int b, int c, int d) { return r[((a * 6 + b) * 6 + c) * 6 + d]; }
inline Complex fget(const FeffermanRiemann& r, int a, int b, int c, int d) { return r[((a * 6 + b) * 6 + c) * 6 + d]; }

/// Sets R_abcd = v together with its images under R_abcd = −R_bacd = −R_abdc
/// = R_cdab and under conjugation (1 ↔ 1̄, 2 ↔ 2̄).
inline void put_curvature_component(FeffermanRiemann& r, int a, int b, int c, int d, Complex v) {
  using fidx::bar;
  for (int pass = 0; pass < 2; ++pass) {
    const int A = pass ? bar(a) : a, B = pass ? bar(b) : b;
    const int C = pass ? bar(c) : c, D = pass ? bar(d) : d;
    const Complex w = pass ? std::conj(v) : v;
    fref(r, A, B, C, D) = w;
    fref(r, B, A, C, D) = -w;
    fref(r, A, B, D, C) = -w;
    fref(r, B, A, D, C) = w;
    fref(r, C, D, A, B) = w;
    fref(r, D, C, A, B) = -w;
    fref(r, C, D, B, A) = -w;
    fref(r, D, C, B, A) = w;
  }
}

/// g^F_ab in the ordering (0, 1, 2, 1̄, 2̄, 3).
inline FeffermanMatrix fefferman_metric_tensor() {
  using namespace fidx;
  FeffermanMatrix g{};
  g[k1][k2b] = g[k2b][k1] = g[k2][k1b] = g[k1b][k2] = g[k0][k3] = g[k3][k0] = 1.0;
  return g;
}

/// Full R^F_abcd from the component table, completed by the pair symmetries
/// and reality.
inline FeffermanRiemann fefferman_riemann(const Mat3& P, const Mat3& starC, const CVec3& zeta, const Vec3& e) {
  using namespace fidx;
  const SchoutenOnFrame p = schouten_on_frame(P, zeta, e);
  const CVec3 ec = complexify(e), zb = conj(zeta);
  const Complex sc_zzb = contract(starC, zeta, zb), sc_zz = contract(starC, zeta, zeta),
                sc_ze = contract(starC, zeta, ec), sc_ee = contract(starC, e, e);
  FeffermanRiemann r{};
  auto put = [&](int a, int b, int c, int d, Complex v) { put_curvature_component(r, a, b, c, d, v); };
  put(k0, k1, k0, k2b, 0.5 * p.ee);
  put(k0, k2b, k1, k1b, -0.5 * p.ze);
  put(k0, k2b, k2, k3, -0.25);
  put(k0, k1, k0, k1b, -sc_zzb);
  put(k0, k1b, k0, k1b, sc_zz);
  put(k0, k1b, k0, k3, -0.5 * p.ze);
  put(k0, k1b, k1, k2, 0.5 * p.zbe);
  put(k0, k1b, k2, k1b, -0.5 * p.ze);
  put(k0, k1b, k1, k1b, -sc_ze);
  put(k0, k1b, k1, k3, -0.5 * p.zzb);
  put(k0, k1b, k1b, k3, -0.5 * p.zz);
  put(k1, k2, k1, k1b, 0.5 * p.zbzb);
  put(k2, k1b, k2, k2b, -0.25);
  put(k1, k1b, k2, k1b, -0.5 * p.zzb);
  put(k2, k3, k1b, k3, 0.25);
  put(k1, k1b, k1, k1b, sc_ee);
  return r;
}

/// R_ab = R_{1a2̄b} + R_{2̄a1b} + R_{2a1̄b} + R_{1̄a2b} + R_{0a3b} + R_{3a0b}
inline FeffermanMatrix fefferman_ricci_contraction(const FeffermanRiemann& r) {
  using namespace fidx;
  FeffermanMatrix ric{};
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b)
      ric[a][b] = fget(r, k1, a, k2b, b) + fget(r, k2b, a, k1, b) + fget(r, k2, a, k1b, b) +
                  fget(r, k1b, a, k2, b) + fget(r, k0, a, k3, b) + fget(r, k3, a, k0, b);
  return ric;
}

/// Nonzero Ricci components from the table, completed by symmetry and reality.
inline FeffermanMatrix fefferman_ricci_table(const Mat3& P, const CVec3& zeta, const Vec3& e) {
  using namespace fidx;
  const SchoutenOnFrame p = schouten_on_frame(P, zeta, e);
  FeffermanMatrix ric{};
  auto put = [&](int a, int b, Complex v) {
    ric[a][b] = ric[b][a] = v;
    ric[bar(a)][bar(b)] = ric[bar(b)][bar(a)] = std::conj(v);
  };
  put(k0, k0, 2.0 * p.ee);
  put(k0, k1, 2.0 * p.zbe);
  put(k2, k2b, 1.0);
  put(k1, k1, 2.0 * p.zbzb);
  put(k1, k1b, 2.0 * p.zzb);
  put(k3, k3, 1.0);
  return ric;
}

/// g^{ab} R_ab = 2(R_{12̄} + R_{21̄} + R_{03})
inline Complex fefferman_scalar(const FeffermanMatrix& ric) {
  using namespace fidx;
  return 2.0 * (ric[k1][k2b] + ric[k2][k1b] + ric[k0][k3]);
}

/// W = R − ¼ (Ric ∧ g)
inline FeffermanRiemann fefferman_weyl(const FeffermanRiemann& r, const FeffermanMatrix& ric) {
  const FeffermanMatrix g = fefferman_metric_tensor();
  FeffermanRiemann w{};
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b)
      for (int c = 0; c < 6; ++c)
        for (int d = 0; d < 6; ++d)
          fref(w, a, b, c, d) = fget(r, a, b, c, d) - 0.25 * (ric[a][c] * g[b][d] - ric[b][c] * g[a][d] +
                                                               ric[b][d] * g[a][c] - ric[a][d] * g[b][c]);
  return w;
}

inline FeffermanCurvatureReport fefferman_curvature(const TensorPack& t, const CVec3& zeta) {
  using namespace fidx;
  PointGeometry pg;
  pg.g = t.g;
  pg.ginv = t.ginv;
  pg.eps = t.eps;
  const Vec3 e = eta(pg, zeta);
  const FeffermanMatrix ric = fefferman_ricci_table(t.schouten, zeta, e);
  const CVec3 ec = complexify(e), zb = conj(zeta);
  FeffermanCurvatureReport rep;
  rep.ricci_00 = ric[k0][k0];
  rep.ricci_01 = ric[k0][k1];
  rep.ricci_22b = ric[k2][k2b];
  rep.ricci_11 = ric[k1][k1];
  rep.ricci_11b = ric[k1][k1b];
  rep.ricci_33 = ric[k3][k3];
  rep.scalar = fefferman_scalar(ric);
  rep.weyl_0101b = -contract(t.star_cotton, zeta, zb);
  rep.weyl_01b01b = contract(t.star_cotton, zeta, zeta);
  rep.weyl_01b11b = -contract(t.star_cotton, zeta, ec);
  rep.weyl_11b11b = contract(t.star_cotton, e, e);

  const FeffermanRiemann full = fefferman_riemann(t.schouten, t.star_cotton, zeta, e);
  const FeffermanMatrix contracted = fefferman_ricci_contraction(full);
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b)
      rep.ricci_consistency = std::max(rep.ricci_consistency, std::abs(contracted[a][b] - ric[a][b]));
  FeffermanRiemann wt{};
  put_curvature_component(wt, k0, k1, k0, k1b, rep.weyl_0101b);
  put_curvature_component(wt, k0, k1b, k0, k1b, rep.weyl_01b01b);
  put_curvature_component(wt, k0, k1b, k1, k1b, rep.weyl_01b11b);
  put_curvature_component(wt, k1, k1b, k1, k1b, rep.weyl_11b11b);
  const FeffermanRiemann w = fefferman_weyl(full, ric);
  for (std::size_t i = 0; i < w.size(); ++i)
    rep.weyl_consistency = std::max(rep.weyl_consistency, std::abs(w[i] - wt[i]));
  return rep;
}

inline FeffermanCurvatureReport fefferman_curvature(const MetricChart& chart, const NullCoframePoint& p) {
  const TensorPack t = evaluate(chart, p.x);
  PointGeometry pg;
  pg.g = t.g;
  const ConeResiduals r = cone_residuals(pg, p.zeta);
  if (r.max() > 1e-8) throw InputError("ζ violates the null cone constraints");
  return fefferman_curvature(t, p.zeta);
}

/// Random ζ on the constraint set at a point, from a seeded generator.
inline CVec3 random_null_vector(const PointGeometry& pg, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  std::uniform_real_distribution<double> ph(-std::numbers::pi, std::numbers::pi);
  Vec3 d{{n(rng), n(rng), n(rng)}};
  return null_vector_along(pg, d, ph(rng));
}

struct FlatnessReport {
  bool conformally_flat = false;
  double max_star_cotton = 0.0;  // max over samples of |*C|_g
  double max_weyl = 0.0;         // max over (point, ζ) draws of the Weyl table entries
  bool consistent = false;       // Weyl verdict agrees with the *C verdict
};

/// Conformal flatness decided by max |*C|_g over the sample points, with the
/// Weyl components of g^F at `draws` random ζ per point as a cross-check.
inline FlatnessReport conformal_flatness_check(const MetricChart& chart, const std::vector<Vec3>& points,
                                               int draws, double tol, std::uint64_t seed = 1) {
  std::mt19937_64 rng(seed);
  FlatnessReport rep;
  for (const Vec3& x : points) {
    const TensorPack t = evaluate(chart, x);
    double n2 = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k)
          for (int l = 0; l < 3; ++l) n2 += t.ginv(i, k) * t.ginv(j, l) * t.star_cotton(i, j) * t.star_cotton(k, l);
    rep.max_star_cotton = std::max(rep.max_star_cotton, std::sqrt(std::max(0.0, n2)));
    PointGeometry pg;
    pg.g = t.g;
    pg.ginv = t.ginv;
    pg.eps = t.eps;
    for (int d = 0; d < draws; ++d) {
      const auto w = fefferman_curvature(t, random_null_vector(pg, rng));
      rep.max_weyl = std::max({rep.max_weyl, std::abs(w.weyl_0101b), std::abs(w.weyl_01b01b),
                               std::abs(w.weyl_01b11b), std::abs(w.weyl_11b11b)});
    }
  }
  rep.conformally_flat = rep.max_star_cotton < tol;
  rep.consistent = rep.conformally_flat == (rep.max_weyl < tol);
  return rep;
}

}  // namespace confgeo
