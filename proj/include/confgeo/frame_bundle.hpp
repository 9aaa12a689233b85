#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <utility>
#include <vector>

#include "confgeo/curve.hpp"
#include "confgeo/fefferman.hpp"
#include "confgeo/tensors.hpp"

// The oriented orthonormal frame bundle P with canonical form φ = ᵗB g dx and
// connection form ω = ᵗB g ∇B. The so(3) element
//   X = [[0, X³, −X²], [−X³, 0, X¹], [X², −X¹, 0]]
// is identified with the vector (X¹, X², X³), so that
//   ω¹ = g(b₂, ∇b₃),  ω² = g(b₃, ∇b₁),  ω³ = g(b₁, ∇b₂).
// The circle generator K acts by B ↦ B e^{sY} with Y ↔ (0, 0, 1).

namespace confgeo {

/// Oriented orthonormal frame B = (b₁, b₂, b₃) at x.
struct Frame {
  Vec3 x{};
  std::array<Vec3, 3> b{};
};

struct SphereBundlePoint {
  Vec3 x{};
  Vec3 eta{};
};

/// (φ(γ̇), ω(γ̇)) for a curve γ on P.
struct FrameVelocity {
  Vec3 phi{};
  Vec3 omega{};
};

inline double wrap_angle(double a) {
  constexpr double pi = std::numbers::pi;
  a = std::remainder(a, 2.0 * pi);
  return a <= -pi ? a + 2.0 * pi : a;
}

/// a − b as a representative in (−π, π].
inline double angle_difference(double a, double b) { return wrap_angle(a - b); }

/// max |g(b_i, b_j) − δ_ij|, with an orientation flip counted as a defect of 2.
inline double orthonormality_defect(const PointGeometry& pg, const Frame& f) {
  double d = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) d = std::max(d, std::abs(pg.inner(f.b[i], f.b[j]) - (i == j ? 1.0 : 0.0)));
  if (pg.triple(f.b[0], f.b[1], f.b[2]) < 0.0) d = std::max(d, 2.0);
  return d;
}

inline void validate_frame(const PointGeometry& pg, const Frame& f, double tol = 1e-8) {
  if (orthonormality_defect(pg, f) > tol) throw InputError("frame is not oriented orthonormal");
}

/// (√2 Re ζ, √2 Im ζ, η)
inline Frame frame_from_zeta(const PointGeometry& pg, const Vec3& x, const CVec3& zeta) {
  const double r2 = std::sqrt(2.0);
  return {x, {r2 * real(zeta), r2 * imag(zeta), eta(pg, zeta)}};
}

inline CVec3 zeta_from_frame(const Frame& f) { return (1.0 / std::sqrt(2.0)) * make_complex(f.b[0], f.b[1]); }

/// Frame velocity from ẋ and the covariant derivatives ∇_ẋ b_j.
inline FrameVelocity frame_velocity(const PointGeometry& pg, const Frame& f, const Vec3& xdot,
                                    const std::array<Vec3, 3>& nabla_b) {
  FrameVelocity v;
  for (int i = 0; i < 3; ++i) v.phi[i] = pg.inner(f.b[i], xdot);
  v.omega[0] = pg.inner(f.b[1], nabla_b[2]);
  v.omega[1] = pg.inner(f.b[2], nabla_b[0]);
  v.omega[2] = pg.inner(f.b[0], nabla_b[1]);
  return v;
}

/// Same, from the coordinate derivatives db_j/dt.
inline FrameVelocity frame_velocity_coordinates(const PointGeometry& pg, const Frame& f, const Vec3& xdot,
                                                const std::array<Vec3, 3>& db) {
  std::array<Vec3, 3> nb;
  for (int j = 0; j < 3; ++j) nb[j] = db[j] + pg.gamma_contract(xdot, f.b[j]);
  return frame_velocity(pg, f, xdot, nb);
}

/// G^F(U, V) = φ(U)·ω(V) + ω(U)·φ(V), i.e. G^F = 2 Σ φⁱ ⊙ ωⁱ.
inline double G_F(const FrameVelocity& u, const FrameVelocity& v) {
  return coord_dot(u.phi, v.omega) + coord_dot(u.omega, v.phi);
}

inline Mat3 so3_matrix(const Vec3& X) {
  Mat3 m;
  m(0, 1) = X[2];
  m(1, 0) = -X[2];
  m(0, 2) = -X[1];
  m(2, 0) = X[1];
  m(1, 2) = X[0];
  m(2, 1) = -X[0];
  return m;
}

/// exp of so3_matrix(X) by Rodrigues' formula.
inline Mat3 exp_so3(const Vec3& X) {
  const double th = coord_norm(X);
  const Mat3 m = so3_matrix(X);
  Mat3 r = Mat3::identity();
  if (th < 1e-12) return r + m + 0.5 * (m * m);
  return r + (std::sin(th) / th) * m + ((1.0 - std::cos(th)) / (th * th)) * (m * m);
}

/// Right action B ↦ B A.
inline Frame rotate(const Frame& f, const Mat3& A) {
  Frame r{f.x, {}};
  for (int j = 0; j < 3; ++j)
    for (int i = 0; i < 3; ++i) r.b[j] = r.b[j] + A(i, j) * f.b[i];
  return r;
}

/// Velocity components after the right action by a constant A: R_A^*(φ, ω) = A⁻¹(φ, ω).
inline FrameVelocity Ad(const Mat3& A, const FrameVelocity& v) {
  const Mat3 At = transpose(A);
  return {At * v.phi, At * v.omega};
}

/// x̃(t) = (x(t), ẋ(t)/|ẋ(t)|)
inline std::vector<SphereBundlePoint> canonical_lift(const MetricChart& chart, const DiscreteCurve& curve) {
  std::vector<SphereBundlePoint> out;
  out.reserve(curve.size());
  for (const auto& s : curve.s) {
    const double n = std::sqrt(contract(chart.metric(s.x), s.v, s.v));
    if (!(n > 0.0)) throw InputError("canonical lift needs a regular curve");
    out.push_back({s.x, s.v / n});
  }
  return out;
}

namespace detail {

// g, g⁻¹, Γ and ε from the first jet; P is left zero.
inline PointGeometry connection_geometry(const MetricChart& chart, const Vec3& x) {
  const MetricJet j = chart.jet(x, 1);
  PointGeometry pg;
  pg.point = x;
  pg.orientation = chart.orientation();
  pg.g = j.g;
  pg.ginv = inverse(j.g);
  for (int k = 0; k < 3; ++k)
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        double s = 0.0;
        for (int l = 0; l < 3; ++l) s += pg.ginv(k, l) * (j.dg[a](b, l) + j.dg[b](a, l) - j.dg[l](a, b));
        pg.gamma(a, b, k) = 0.5 * s;
      }
  pg.eps = volume_form(j.g, chart.orientation());
  return pg;
}

inline std::vector<PointGeometry> connection_geometries(const MetricChart& chart, const DiscreteCurve& c) {
  std::vector<PointGeometry> out;
  out.reserve(c.size());
  for (const auto& s : c.s) {
    out.push_back(connection_geometry(chart, s.x));
    if (!(out.back().norm(s.v) > 1e-8)) throw InputError("curve is not regular");
  }
  return out;
}

inline Vec3 unit_tangent(const PointGeometry& pg, const CurveState& s) { return s.v / pg.norm(s.v); }

}  // namespace detail

/// Normal-connection transport on every other sample (RK4 with step 2h).
struct NormalTransport {
  std::vector<std::size_t> index;
  std::vector<double> t;
  std::vector<Vec3> nu;
  double max_defect = 0.0;  // largest drift from unit normality before each correction
};

inline NormalTransport normal_transport(const MetricChart& chart, const DiscreteCurve& curve, const Vec3& nu0,
                                        const std::vector<PointGeometry>* geometries = nullptr) {
  detail::require_transport_grid(curve);
  std::vector<PointGeometry> own;
  if (!geometries) own = detail::connection_geometries(chart, curve);
  const std::vector<PointGeometry>& pgs = geometries ? *geometries : own;
  {
    const Vec3 T = detail::unit_tangent(pgs[0], curve.s[0]);
    if (std::abs(pgs[0].inner(nu0, nu0) - 1.0) > 1e-8 || std::abs(pgs[0].inner(nu0, T)) > 1e-8)
      throw InputError("initial vector for normal transport is not a unit normal");
  }
  const double H = 2.0 * curve.uniform_step();
  NormalTransport r;
  Vec3 nu = nu0;
  auto f = [&](std::size_t j, const Vec3& y) { return detail::normal_transport_rhs(pgs[j], curve.s[j], y); };
  for (std::size_t i = 0;; i += 2) {
    r.index.push_back(i);
    r.t.push_back(curve.t[i]);
    r.nu.push_back(nu);
    if (i + 2 >= curve.size()) break;
    const Vec3 k1 = f(i, nu);
    const Vec3 k2 = f(i + 1, nu + 0.5 * H * k1);
    const Vec3 k3 = f(i + 1, nu + 0.5 * H * k2);
    const Vec3 k4 = f(i + 2, nu + H * k3);
    nu = nu + (H / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    const PointGeometry& pg = pgs[i + 2];
    const Vec3 T = detail::unit_tangent(pg, curve.s[i + 2]);
    const double along = pg.inner(nu, T);
    r.max_defect = std::max({r.max_defect, std::abs(along), std::abs(pg.inner(nu, nu) - 1.0)});
    nu = nu - along * T;
    nu = nu / pg.norm(nu);
  }
  return r;
}

/// A unit normal field and its covariant derivative along the curve.
struct NormalField {
  Vec3 nu{};
  Vec3 nabla_nu{};
};

namespace detail {

// Normalized projection of a coordinate-constant E onto ẋ^⊥, with ∇_ẋ in closed form.
inline NormalField projected_normal(const PointGeometry& pg, const CurveState& s, const Vec3& E) {
  const Vec3 T = unit_tangent(pg, s);
  const Vec3 dT = nabla_unit_tangent(pg, s);
  const Vec3 dE = pg.gamma_contract(s.v, E);
  const double eT = pg.inner(E, T);
  const Vec3 w = E - eT * T;
  const Vec3 dw = dE - (pg.inner(dE, T) + pg.inner(E, dT)) * T - eT * dT;
  const double nw = pg.norm(w);
  const Vec3 nu = w / nw;
  return {nu, (dw - pg.inner(dw, nu) * nu) / nw};
}

inline std::vector<Vec3> reference_candidates() {
  std::vector<Vec3> c;
  for (int i = 0; i < 3; ++i) {
    Vec3 e{};
    e[i] = 1.0;
    c.push_back(e);
  }
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      for (double s : {1.0, -1.0}) {
        Vec3 e{};
        e[i] = 1.0;
        e[j] = s;
        c.push_back(e);
      }
  for (double s1 : {1.0, -1.0})
    for (double s2 : {1.0, -1.0}) c.push_back({{1.0, s1, s2}});
  return c;
}

// Candidate direction whose projection onto ẋ^⊥ stays largest along the curve.
inline Vec3 reference_direction(const std::vector<PointGeometry>& pgs, const DiscreteCurve& c) {
  Vec3 best{};
  double best_score = -1.0;
  for (const Vec3& E : reference_candidates()) {
    double score = 1e300;
    for (std::size_t i = 0; i < c.size(); ++i) {
      const Vec3 T = unit_tangent(pgs[i], c.s[i]);
      const double e2 = pgs[i].inner(E, E);
      const double eT = pgs[i].inner(E, T);
      score = std::min(score, std::sqrt(std::max(0.0, 1.0 - eT * eT / e2)));
    }
    if (score > best_score) best_score = score, best = E;
  }
  if (best_score < 1e-3) throw NumericalError("no reference normal direction stays transverse to the curve");
  return best;
}

inline void require_endpoint_frame(const PointGeometry& pg, const CurveState& s, const Frame& f,
                                   const char* which) {
  if (max_abs(f.x - s.x) > 1e-8 * (1.0 + max_abs(s.x)))
    throw InputError(std::string("endpoint frame ") + which + " is not based at the curve endpoint");
  if (orthonormality_defect(pg, f) > 1e-8)
    throw InputError(std::string("endpoint frame ") + which + " is not oriented orthonormal");
  if (max_abs(f.b[2] - unit_tangent(pg, s)) > 1e-6)
    throw InputError(std::string("third vector of endpoint frame ") + which + " does not match the curve tangent");
}

// Angle of v in the oriented basis (f.b₁, f.b₂).
inline double frame_angle(const PointGeometry& pg, const Frame& f, const Vec3& v) {
  return std::atan2(pg.inner(v, f.b[1]), pg.inner(v, f.b[0]));
}

}  // namespace detail

/// Total torsion for endpoint frames A, B, in (−π, π]. `monodromy` measures
/// the angle from h(ν(a)) to the transported ν(b); `integral` evaluates
/// −∫ g(∇_ẋν, T×ν) dt for a reference normal field plus the endpoint angles
/// of that field in A and B.
struct TotalTorsion {
  double monodromy = 0.0;
  double integral = 0.0;
  double max_transport_defect = 0.0;
  double discrepancy() const { return std::abs(angle_difference(monodromy, integral)); }
};

inline double total_torsion_monodromy(const MetricChart& chart, const DiscreteCurve& curve, const Frame& A,
                                      const Frame& B, double* defect = nullptr,
                                      const std::vector<PointGeometry>* geometries = nullptr) {
  std::vector<PointGeometry> own;
  if (!geometries) own = detail::connection_geometries(chart, curve);
  const std::vector<PointGeometry>& pgs = geometries ? *geometries : own;
  detail::require_endpoint_frame(pgs.front(), curve.s.front(), A, "A");
  detail::require_endpoint_frame(pgs.back(), curve.s.back(), B, "B");
  const NormalTransport tr = normal_transport(chart, curve, A.b[0], &pgs);
  if (defect) *defect = tr.max_defect;
  return wrap_angle(detail::frame_angle(pgs.back(), B, tr.nu.back()));
}

inline TotalTorsion total_torsion(const MetricChart& chart, const DiscreteCurve& curve, const Frame& A,
                                  const Frame& B) {
  const std::vector<PointGeometry> pgs = detail::connection_geometries(chart, curve);
  TotalTorsion r;
  r.monodromy = total_torsion_monodromy(chart, curve, A, B, &r.max_transport_defect, &pgs);
  const Vec3 E = detail::reference_direction(pgs, curve);
  std::vector<double> f(curve.size());
  NormalField first, last;
  for (std::size_t i = 0; i < curve.size(); ++i) {
    const NormalField n = detail::projected_normal(pgs[i], curve.s[i], E);
    const Vec3 T = detail::unit_tangent(pgs[i], curve.s[i]);
    f[i] = -pgs[i].inner(n.nabla_nu, pgs[i].cross(T, n.nu));
    if (i == 0) first = n;
    last = n;
  }
  const double beta_a = detail::frame_angle(pgs.front(), A, first.nu);
  const double beta_b = detail::frame_angle(pgs.back(), B, last.nu);
  r.integral = wrap_angle(simpson(f, curve.uniform_step()) + beta_b - beta_a);
  return r;
}

/// τ = det(ẋ, ∇ẋ, ∇∇ẋ)/|ẋ × ∇ẋ|²
inline double torsion_function(const PointGeometry& pg, const CurveState& s, const Vec3& jerk) {
  const Vec3 va = pg.cross(s.v, s.a);
  const double n2 = pg.inner(va, va);
  const double sp = pg.norm(s.v);
  if (!(std::sqrt(n2) > 1e-10 * sp * sp * sp)) throw InputError("torsion is undefined where the geodesic curvature vanishes");
  return pg.triple(s.v, s.a, jerk) / n2;
}

inline double torsion_function(const MetricChart& chart, const CurveState& s, const Vec3& jerk) {
  return torsion_function(point_geometry(chart, s.x), s, jerk);
}

/// Frame (n, T×n, T) at a sample, with n the normal part of `seed` rotated
/// by `angle` about T.
inline Frame adapted_frame(const PointGeometry& pg, const CurveState& s, const Vec3& seed, double angle = 0.0) {
  const double sp = pg.norm(s.v);
  if (!(sp > 0.0)) throw InputError("adapted frame needs nonzero velocity");
  const Vec3 T = s.v / sp;
  Vec3 n = seed - pg.inner(seed, T) * T;
  const double nn = pg.norm(n);
  if (!(nn > 1e-8 * std::sqrt(pg.inner(seed, seed)))) throw InputError("frame seed is tangent to the curve");
  n = n / nn;
  const Vec3 m = pg.cross(T, n);
  const Vec3 e1 = std::cos(angle) * n + std::sin(angle) * m;
  return {s.x, {e1, pg.cross(T, e1), T}};
}

/// Frenet frame (N, B, T); InputError where the geodesic curvature vanishes.
inline Frame frenet_frame(const PointGeometry& pg, const CurveState& s) {
  const double sp = pg.norm(s.v);
  const Vec3 k = s.a - (pg.inner(s.a, s.v) / (sp * sp)) * s.v;
  if (!(pg.norm(k) > 1e-10 * sp * sp)) throw InputError("Frenet frame is undefined where the geodesic curvature vanishes");
  return adapted_frame(pg, s, k);
}

/// ∇_T∇_T T for T = ẋ/|ẋ|, from (ẋ, ∇ẋ, ∇∇ẋ).
inline Vec3 second_tangent_derivative(const PointGeometry& pg, const CurveState& s, const Vec3& jerk) {
  const double sp = pg.norm(s.v);
  const Vec3 T = s.v / sp;
  const Vec3 dT = (s.a - pg.inner(s.a, T) * T) / sp;  // ∇_ẋ T
  const double aT = pg.inner(s.a, T);
  const Vec3 k = s.a - aT * T;
  const Vec3 dk = jerk - (pg.inner(jerk, T) + pg.inner(s.a, dT)) * T - aT * dT;
  return (dk / (sp * sp) - (2.0 * aT / (sp * sp * sp)) * k) / sp;
}

/// The two forms of the first variation density of the total torsion:
///   T × ∇_T∇_T T + (*R)(T)T   and   T × (∇_T∇_T T − P(T)).
struct TorsionGradient {
  Vec3 star_form{};
  Vec3 schouten_form{};
  double mismatch() const { return max_abs(star_form - schouten_form); }
};

inline TorsionGradient torsion_gradient(const PointGeometry& pg, const Tensor3& star_r, const CurveState& s,
                                        const Vec3& jerk) {
  const Vec3 T = s.v / pg.norm(s.v);
  const Vec3 ttt = second_tangent_derivative(pg, s, jerk);
  TorsionGradient g;
  Vec3 rt{};
  for (int k = 0; k < 3; ++k)
    for (int m = 0; m < 3; ++m)
      for (int l = 0; l < 3; ++l) rt[k] += star_r(m, k, l) * T[m] * T[l];
  g.star_form = pg.cross(T, ttt) + rt;
  g.schouten_form = pg.cross(T, ttt - pg.schouten_raised(T));
  return g;
}

inline TorsionGradient torsion_gradient(const MetricChart& chart, const CurveState& s, const Vec3& jerk) {
  return torsion_gradient(point_geometry(chart, s.x), star_riemann(chart, s.x), s, jerk);
}

/// A curve on P over the canonical lift, with its frame velocity per sample.
struct FramePath {
  std::vector<double> t;
  std::vector<Frame> frames;
  std::vector<FrameVelocity> velocity;
};

/// ψ(t) and ψ'(t)
using AngleProfile = std::function<std::pair<double, double>(double)>;

/// Section (ν, T×ν, T) along the curve with ν the reference normal rotated by ψ(t).
inline FramePath section_along(const MetricChart& chart, const DiscreteCurve& curve, const AngleProfile& psi = {}) {
  const std::vector<PointGeometry> pgs = detail::connection_geometries(chart, curve);
  const Vec3 E = detail::reference_direction(pgs, curve);
  FramePath p;
  for (std::size_t i = 0; i < curve.size(); ++i) {
    const PointGeometry& pg = pgs[i];
    const CurveState& s = curve.s[i];
    const NormalField n = detail::projected_normal(pg, s, E);
    const Vec3 T = detail::unit_tangent(pg, s);
    const Vec3 dT = detail::nabla_unit_tangent(pg, s);
    const Vec3 m = pg.cross(T, n.nu);
    const Vec3 dm = pg.cross(dT, n.nu) + pg.cross(T, n.nabla_nu);
    const auto [ang, rate] = psi ? psi(curve.t[i]) : std::pair<double, double>{0.0, 0.0};
    const double c = std::cos(ang), sn = std::sin(ang);
    const Vec3 b1 = c * n.nu + sn * m;
    const Vec3 b2 = -sn * n.nu + c * m;
    const Vec3 db1 = rate * b2 + c * n.nabla_nu + sn * dm;
    const Vec3 db2 = -rate * b1 - sn * n.nabla_nu + c * dm;
    const Frame f{s.x, {b1, b2, T}};
    p.t.push_back(curve.t[i]);
    p.frames.push_back(f);
    p.velocity.push_back(frame_velocity(pg, f, s.v, {db1, db2, dT}));
  }
  return p;
}

/// Kropina integrand G^F(γ̇, γ̇)/G^F(K, γ̇) = 2 φ·ω / φ³.
inline double kropina_integrand(const FrameVelocity& v) {
  if (!(std::abs(v.phi[2]) > 1e-12 * (1.0 + coord_norm(v.phi))))
    throw InputError("curve is tangent to the contact distribution; the Kropina metric is undefined");
  return 2.0 * coord_dot(v.phi, v.omega) / v.phi[2];
}

/// 𝓛 = ∫ G^F(γ̇, γ̇)/G^F(K, γ̇) dt (composite Simpson).
inline double kropina_functional(const FramePath& p) {
  if (p.t.size() < 3) throw InputError("Kropina functional needs at least three samples");
  std::vector<double> f;
  f.reserve(p.velocity.size());
  for (const auto& v : p.velocity) f.push_back(kropina_integrand(v));
  DiscreteCurve grid;
  grid.t = p.t;
  return simpson(f, grid.uniform_step());
}

struct VariationalOptions {
  double epsilon = 1e-3;
  int modes = 4;  // perturbations sin²(πu) cos(mπu) e_k for m < modes, k = 1..3
};

/// Finite-difference first variations of the total torsion along bump
/// perturbations fixing the endpoint 1-jets, compared against the integral
/// of the variation density; plus vertical variations of the Kropina length.
struct FunctionalReport {
  double value_L = 0.0;
  double value_T = 0.0;
  std::vector<double> grad;       // d𝓣/dε per perturbation
  std::vector<double> predicted;  // ∫ g(density, V)|ẋ| dt per perturbation
  std::vector<double> vertical;   // d𝓛/dε per vertical perturbation
  double max_grad = 0.0;
  double max_predicted = 0.0;
  double max_vertical = 0.0;
  double max_prediction_error = 0.0;  // max |grad − predicted|
  Frame A, B;

  /// max |grad − predicted| relative to the size of the predicted gradient;
  /// an absolute floor keeps critical curves from dividing by zero.
  double relative_prediction_error(double floor = 1e-3) const {
    return max_prediction_error / std::max(max_predicted, floor);
  }
};

namespace detail {

struct Bump {
  double value, rate, accel;
};

// sin²(πu) cos(mπu) on u = (t − t0)/L, with t-derivatives
inline Bump bump(int m, double t, double t0, double L) {
  const double pi = std::numbers::pi;
  const double u = (t - t0) / L;
  const double s = std::sin(pi * u), c = std::cos(pi * u);
  const double w = m * pi;
  const double cm = std::cos(w * u), sm = std::sin(w * u);
  const double f = s * s, fu = 2.0 * pi * s * c, fuu = 2.0 * pi * pi * (c * c - s * s);
  const double value = f * cm;
  const double rate = fu * cm - f * w * sm;
  const double accel = fuu * cm - 2.0 * fu * w * sm - f * w * w * cm;
  return {value, rate / L, accel / (L * L)};
}

inline DiscreteCurve perturbed_curve(const MetricChart& chart, const DiscreteCurve& c,
                                     const std::vector<PointGeometry>& pgs, int mode, int dir, double eps) {
  DiscreteCurve r;
  r.t = c.t;
  r.s.resize(c.size());
  const double t0 = c.t.front(), L = c.t.back() - c.t.front();
  for (std::size_t i = 0; i < c.size(); ++i) {
    const Bump b = bump(mode, c.t[i], t0, L);
    const CurveState& s = c.s[i];
    const Vec3 xdd = coordinate_acceleration(pgs[i], s);
    CurveState p = s;
    p.x[dir] += eps * b.value;
    p.v[dir] += eps * b.rate;
    Vec3 pdd = xdd;
    pdd[dir] += eps * b.accel;
    const Tensor3 G = christoffel(chart, p.x);
    p.a = pdd;
    for (int k = 0; k < 3; ++k)
      for (int a = 0; a < 3; ++a)
        for (int q = 0; q < 3; ++q) p.a[k] += G(a, q, k) * p.v[a] * p.v[q];
    r.s[i] = p;
  }
  return r;
}

}  // namespace detail

inline FunctionalReport variational_check(const MetricChart& chart, const DiscreteCurve& curve,
                                          const VariationalOptions& opt = {}) {
  if (!(opt.epsilon > 0.0) || opt.modes < 1) throw InputError("variational check needs ε > 0 and at least one mode");
  detail::require_transport_grid(curve);
  const std::vector<PointGeometry> pgs = detail::connection_geometries(chart, curve);
  const FramePath section = section_along(chart, curve);
  FunctionalReport rep;
  rep.A = section.frames.front();
  rep.B = section.frames.back();
  rep.value_L = kropina_functional(section);
  rep.value_T = total_torsion_monodromy(chart, curve, rep.A, rep.B, nullptr, &pgs);

  DiscreteCurve base = curve;
  ensure_jerk(chart, base);
  const double h = curve.uniform_step();
  const double t0 = curve.t.front(), L = curve.t.back() - curve.t.front();
  std::vector<Vec3> density(curve.size());
  std::vector<double> speed(curve.size());
  for (std::size_t i = 0; i < curve.size(); ++i) {
    const PointGeometry pg = point_geometry(chart, curve.s[i].x);
    density[i] = torsion_gradient(pg, star_riemann(chart, curve.s[i].x), base.s[i], base.jerk[i]).star_form;
    speed[i] = pg.norm(curve.s[i].v);
  }

  for (int dir = 0; dir < 3; ++dir)
    for (int m = 0; m < opt.modes; ++m) {
      auto torsion_at = [&](double eps) {
        const DiscreteCurve p = detail::perturbed_curve(chart, curve, pgs, m, dir, eps);
        return total_torsion_monodromy(chart, p, rep.A, rep.B);
      };
      const double d = angle_difference(torsion_at(opt.epsilon), torsion_at(-opt.epsilon)) / (2.0 * opt.epsilon);
      std::vector<double> f(curve.size());
      for (std::size_t i = 0; i < curve.size(); ++i) {
        Vec3 V{};
        V[dir] = detail::bump(m, curve.t[i], t0, L).value;
        f[i] = pgs[i].inner(density[i], V) * speed[i];
      }
      const double pred = simpson(f, h);
      rep.grad.push_back(d);
      rep.predicted.push_back(pred);
      rep.max_grad = std::max(rep.max_grad, std::abs(d));
      rep.max_predicted = std::max(rep.max_predicted, std::abs(pred));
      rep.max_prediction_error = std::max(rep.max_prediction_error, std::abs(d - pred));
    }

  // vertical variations γ_ε = γ e^{ε f(t) X₀}: φ_ε = Eᵀφ, ω_ε = Eᵀω + ε ḟ X₀
  for (int dir = 0; dir < 3; ++dir)
    for (int m = 0; m < opt.modes; ++m) {
      auto length_at = [&](double eps) {
        std::vector<double> f(curve.size());
        for (std::size_t i = 0; i < curve.size(); ++i) {
          const detail::Bump b = detail::bump(m, curve.t[i], t0, L);
          Vec3 X{};
          X[dir] = 1.0;
          const Mat3 Et = transpose(exp_so3(eps * b.value * X));
          FrameVelocity v{Et * section.velocity[i].phi, Et * section.velocity[i].omega};
          v.omega = v.omega + (eps * b.rate) * X;
          f[i] = kropina_integrand(v);
        }
        return simpson(f, h);
      };
      const double d = (length_at(opt.epsilon) - length_at(-opt.epsilon)) / (2.0 * opt.epsilon);
      rep.vertical.push_back(d);
      rep.max_vertical = std::max(rep.max_vertical, std::abs(d));
    }
  return rep;
}

}  // namespace confgeo
