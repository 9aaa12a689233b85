#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include "confgeo/chart.hpp"
#include "confgeo/scalar_field.hpp"

// Index conventions, fixed once for the whole library:
//   Γ(i, j, k)        = Γ_ij^k, the Levi-Civita symbols, symmetric in (i, j)
//   R_ij^k_l          defined by (∇_i∇_j − ∇_j∇_i) X^k = R_ij^k_l X^l
//   R_ijkl            = R_ij^m_l g_mk
//   Ric_ij            = R_ki^k_j,   R = g^ij Ric_ij
//   P_ij              = Ric_ij − R g_ij / 4                   (Schouten, n = 3)
//   C_ijk             = ∇_k P_ij − ∇_j P_ik                   (Cotton)
//   ε_ijk             = ±√det g [ijk], + in positively oriented charts
//   (*C)_ij           = ε_j^kl C_ikl / 2
//   (X × Y)^i         = ε^i_jk X^j Y^k
// Indices are raised and lowered with g at the evaluation point.

namespace confgeo {

/// All pointwise tensors of the chart metric at one point.
struct TensorPack {
  Vec3 point{};
  int orientation = +1;
  Mat3 g;
  Mat3 ginv;
  Tensor3 gamma;          // Γ_ij^k
  Tensor4 riemann_mixed;  // R_ij^k_l
  Tensor4 riemann;        // R_ijkl
  Mat3 ricci;
  double scalar = 0.0;
  Mat3 schouten;
  Tensor3 cotton;  // C_ijk
  Mat3 star_cotton;
  Tensor3 eps;  // ε_ijk
};

/// Metric, inverse, Christoffel symbols and Schouten tensor at a point; the
/// minimum needed by the curve ODEs.
struct PointGeometry {
  Vec3 point{};
  int orientation = +1;
  Mat3 g;
  Mat3 ginv;
  Tensor3 gamma;
  Mat3 schouten;
  Tensor3 eps;

  double inner(const Vec3& a, const Vec3& b) const { return contract(g, a, b); }
  Complex inner(const CVec3& a, const CVec3& b) const { return contract(g, a, b); }
  Complex inner(const CVec3& a, const Vec3& b) const { return contract(g, a, b); }
  double norm(const Vec3& a) const { return std::sqrt(inner(a, a)); }

  /// Γ_ij^k X^i Y^j
  template <class A, class B>
  auto gamma_contract(const Vec3T<A>& x, const Vec3T<B>& y) const {
    Vec3T<decltype(x[0] * y[0])> r;
    for (int k = 0; k < 3; ++k)
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r[k] += gamma(i, j, k) * x[i] * y[j];
    return r;
  }

  /// Index-raised P(X)^i = g^ij P_jk X^k.
  template <class T>
  Vec3T<T> schouten_raised(const Vec3T<T>& x) const {
    return ginv * (schouten * x);
  }

  template <class A, class B>
  auto cross(const Vec3T<A>& x, const Vec3T<B>& y) const {
    Vec3T<decltype(x[0] * y[0])> low;
    for (int m = 0; m < 3; ++m)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) low[m] += eps(m, j, k) * x[j] * y[k];
    return ginv * low;
  }

  /// ε(X, Y, Z) = g(X × Y, Z).
  double triple(const Vec3& x, const Vec3& y, const Vec3& z) const {
    double s = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) s += eps(i, j, k) * x[i] * y[j] * z[k];
    return s;
  }
};

namespace detail {

inline int levi_civita(int i, int j, int k) {
  if (i == j || j == k || i == k) return 0;
  return ((i == 0 && j == 1) || (i == 1 && j == 2) || (i == 2 && j == 0)) ? 1 : -1;
}

inline Tensor3 volume_form(const Mat3& g, int orientation) {
  Tensor3 e;
  const double s = orientation * std::sqrt(det(g));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) e(i, j, k) = s * levi_civita(i, j, k);
  return e;
}

// Γ and its first two coordinate derivatives from a metric jet.
struct ConnectionJet {
  Mat3 ginv;
  std::array<Mat3, 3> dginv{};
  Tensor3 gamma;
  std::array<Tensor3, 3> dgamma{};
  std::array<std::array<Tensor3, 3>, 3> d2gamma{};
};

inline ConnectionJet connection_jet(const MetricJet& j) {
  ConnectionJet c;
  const Mat3& h = c.ginv = inverse(j.g);
  // A_ijl = d_i g_jl + d_j g_il − d_l g_ij
  auto A = [&](int i, int jj, int l) { return j.dg[i](jj, l) + j.dg[jj](i, l) - j.dg[l](i, jj); };
  auto dA = [&](int m, int i, int jj, int l) {
    return j.d2g[m][i](jj, l) + j.d2g[m][jj](i, l) - j.d2g[m][l](i, jj);
  };
  auto d2A = [&](int m, int n, int i, int jj, int l) {
    return j.d3g[m][n][i](jj, l) + j.d3g[m][n][jj](i, l) - j.d3g[m][n][l](i, jj);
  };
  if (j.order >= 1) {
    for (int i = 0; i < 3; ++i)
      for (int jj = 0; jj < 3; ++jj)
        for (int k = 0; k < 3; ++k) {
          double s = 0.0;
          for (int l = 0; l < 3; ++l) s += h(k, l) * A(i, jj, l);
          c.gamma(i, jj, k) = 0.5 * s;
        }
  }
  if (j.order >= 2) {
    for (int m = 0; m < 3; ++m) c.dginv[m] = -1.0 * (h * j.dg[m] * h);
    for (int m = 0; m < 3; ++m)
      for (int i = 0; i < 3; ++i)
        for (int jj = 0; jj < 3; ++jj)
          for (int k = 0; k < 3; ++k) {
            double s = 0.0;
            for (int l = 0; l < 3; ++l) s += c.dginv[m](k, l) * A(i, jj, l) + h(k, l) * dA(m, i, jj, l);
            c.dgamma[m](i, jj, k) = 0.5 * s;
          }
  }
  if (j.order >= 3) {
    for (int m = 0; m < 3; ++m)
      for (int n = m; n < 3; ++n) {
        const Mat3 d2h = h * j.dg[m] * h * j.dg[n] * h + h * j.dg[n] * h * j.dg[m] * h -
                         h * j.d2g[m][n] * h;
        Tensor3 t;
        for (int i = 0; i < 3; ++i)
          for (int jj = 0; jj < 3; ++jj)
            for (int k = 0; k < 3; ++k) {
              double s = 0.0;
              for (int l = 0; l < 3; ++l)
                s += d2h(k, l) * A(i, jj, l) + c.dginv[m](k, l) * dA(n, i, jj, l) +
                     c.dginv[n](k, l) * dA(m, i, jj, l) + h(k, l) * d2A(m, n, i, jj, l);
              t(i, jj, k) = 0.5 * s;
            }
        c.d2gamma[m][n] = t;
        c.d2gamma[n][m] = t;
      }
  }
  return c;
}

// R_ij^k_l from Γ and dΓ.
inline Tensor4 riemann_mixed(const ConnectionJet& c) {
  Tensor4 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) {
          double s = c.dgamma[i](j, l, k) - c.dgamma[j](i, l, k);
          for (int m = 0; m < 3; ++m)
            s += c.gamma(i, m, k) * c.gamma(j, l, m) - c.gamma(j, m, k) * c.gamma(i, l, m);
          r(i, j, k, l) = s;
        }
  return r;
}

// d_n R_ij^k_l
inline Tensor4 riemann_mixed_derivative(const ConnectionJet& c, int n) {
  Tensor4 r;
  const Tensor3& G = c.gamma;
  const Tensor3& dG = c.dgamma[n];
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) {
          double s = c.d2gamma[n][i](j, l, k) - c.d2gamma[n][j](i, l, k);
          for (int m = 0; m < 3; ++m)
            s += dG(i, m, k) * G(j, l, m) + G(i, m, k) * dG(j, l, m) - dG(j, m, k) * G(i, l, m) -
                 G(j, m, k) * dG(i, l, m);
          r(i, j, k, l) = s;
        }
  return r;
}

inline Mat3 ricci_from(const Tensor4& rm) {
  Mat3 ric;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) ric(i, j) += rm(k, i, k, j);
  return ric;
}

inline double trace_with(const Mat3& ginv, const Mat3& a) {
  double s = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) s += ginv(i, j) * a(i, j);
  return s;
}

}  // namespace detail

/// Christoffel symbols Γ_ij^k at x.
inline Tensor3 christoffel(const MetricChart& chart, const Vec3& x) {
  return detail::connection_jet(chart.jet(x, 1)).gamma;
}

/// ε_ijk at x, sign from the chart orientation.
inline Tensor3 volume_eps(const MetricChart& chart, const Vec3& x) {
  return detail::volume_form(chart.metric(x), chart.orientation());
}

inline PointGeometry point_geometry(const MetricChart& chart, const Vec3& x) {
  const MetricJet j = chart.jet(x, 2);
  const detail::ConnectionJet c = detail::connection_jet(j);
  PointGeometry pg;
  pg.point = x;
  pg.orientation = chart.orientation();
  pg.g = j.g;
  pg.ginv = c.ginv;
  pg.gamma = c.gamma;
  const Mat3 ric = detail::ricci_from(detail::riemann_mixed(c));
  const double r = detail::trace_with(c.ginv, ric);
  pg.schouten = ric - (0.25 * r) * j.g;
  pg.eps = detail::volume_form(j.g, chart.orientation());
  return pg;
}

/// Every pointwise tensor at x. Needs third partials of g.
inline TensorPack evaluate(const MetricChart& chart, const Vec3& x) {
  const MetricJet j = chart.jet(x, 3);
  const detail::ConnectionJet c = detail::connection_jet(j);
  TensorPack t;
  t.point = x;
  t.orientation = chart.orientation();
  t.g = j.g;
  t.ginv = c.ginv;
  t.gamma = c.gamma;
  t.riemann_mixed = detail::riemann_mixed(c);
  for (int i = 0; i < 3; ++i)
    for (int jj = 0; jj < 3; ++jj)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) {
          double s = 0.0;
          for (int m = 0; m < 3; ++m) s += t.riemann_mixed(i, jj, m, l) * j.g(m, k);
          t.riemann(i, jj, k, l) = s;
        }
  t.ricci = detail::ricci_from(t.riemann_mixed);
  t.scalar = detail::trace_with(c.ginv, t.ricci);
  t.schouten = t.ricci - (0.25 * t.scalar) * j.g;

  // d_n P_ij
  std::array<Mat3, 3> dP;
  for (int n = 0; n < 3; ++n) {
    const Mat3 dric = detail::ricci_from(detail::riemann_mixed_derivative(c, n));
    const double dr = detail::trace_with(c.dginv[n], t.ricci) + detail::trace_with(c.ginv, dric);
    dP[n] = dric - 0.25 * (dr * j.g + t.scalar * j.dg[n]);
  }
  // ∇_k P_ij
  auto nablaP = [&](int k, int a, int b) {
    double s = dP[k](a, b);
    for (int l = 0; l < 3; ++l) s -= c.gamma(k, a, l) * t.schouten(l, b) + c.gamma(k, b, l) * t.schouten(a, l);
    return s;
  };
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int k = 0; k < 3; ++k) t.cotton(a, b, k) = nablaP(k, a, b) - nablaP(b, a, k);

  t.eps = detail::volume_form(j.g, chart.orientation());
  for (int i = 0; i < 3; ++i)
    for (int jj = 0; jj < 3; ++jj) {
      double s = 0.0;
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) {
          double e_up = 0.0;  // ε_j^kl
          for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) e_up += t.eps(jj, a, b) * c.ginv(a, k) * c.ginv(b, l);
          s += e_up * t.cotton(i, k, l);
        }
      t.star_cotton(i, jj) = 0.5 * s;
    }
  return t;
}

/// R_ijkl (all indices lowered).
inline Tensor4 riemann(const MetricChart& chart, const Vec3& x) {
  const MetricJet j = chart.jet(x, 2);
  const Tensor4 rm = detail::riemann_mixed(detail::connection_jet(j));
  Tensor4 r;
  for (int i = 0; i < 3; ++i)
    for (int jj = 0; jj < 3; ++jj)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l)
          for (int m = 0; m < 3; ++m) r(i, jj, k, l) += rm(i, jj, m, l) * j.g(m, k);
  return r;
}

inline Mat3 ricci(const MetricChart& chart, const Vec3& x) {
  return detail::ricci_from(detail::riemann_mixed(detail::connection_jet(chart.jet(x, 2))));
}

inline double scalar_curvature(const MetricChart& chart, const Vec3& x) {
  const MetricJet j = chart.jet(x, 2);
  const detail::ConnectionJet c = detail::connection_jet(j);
  return detail::trace_with(c.ginv, detail::ricci_from(detail::riemann_mixed(c)));
}

inline Mat3 schouten(const MetricChart& chart, const Vec3& x) {
  return point_geometry(chart, x).schouten;
}

inline Tensor3 cotton(const MetricChart& chart, const Vec3& x) { return evaluate(chart, x).cotton; }

inline Mat3 star_cotton(const MetricChart& chart, const Vec3& x) {
  return evaluate(chart, x).star_cotton;
}

/// X × Y at x; complex-bilinear when either argument is complex.
template <class A, class B>
auto cross(const MetricChart& chart, const Vec3& x, const Vec3T<A>& a, const Vec3T<B>& b) {
  PointGeometry pg;
  pg.g = chart.metric(x);
  pg.ginv = inverse(pg.g);
  pg.eps = detail::volume_form(pg.g, chart.orientation());
  return pg.cross(a, b);
}

/// (*R)_i^k_l = ε_i^pq R_pq^k_l / 2, returned as star(i, k, l).
namespace detail {

inline Tensor3 star_riemann(const Tensor3& eps, const Mat3& ginv, const Tensor4& rm) {
  Tensor3 e_up;  // ε_i^pq
  for (int i = 0; i < 3; ++i)
    for (int p = 0; p < 3; ++p)
      for (int q = 0; q < 3; ++q)
        for (int a = 0; a < 3; ++a)
          for (int b = 0; b < 3; ++b) e_up(i, p, q) += eps(i, a, b) * ginv(a, p) * ginv(b, q);
  Tensor3 s;
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k)
      for (int l = 0; l < 3; ++l) {
        double v = 0.0;
        for (int p = 0; p < 3; ++p)
          for (int q = 0; q < 3; ++q) v += e_up(i, p, q) * rm(p, q, k, l);
        s(i, k, l) = 0.5 * v;
      }
  return s;
}

}  // namespace detail

inline Tensor3 star_riemann(const TensorPack& t) { return detail::star_riemann(t.eps, t.ginv, t.riemann_mixed); }

/// (*R) from the second jet only.
inline Tensor3 star_riemann(const MetricChart& chart, const Vec3& x) {
  const MetricJet j = chart.jet(x, 2);
  const detail::ConnectionJet c = detail::connection_jet(j);
  return detail::star_riemann(detail::volume_form(j.g, chart.orientation()), c.ginv, detail::riemann_mixed(c));
}

/// Residuals of the algebraic curvature identities at one point.
struct CurvatureIdentities {
  double symmetries = 0.0;     // pair (anti)symmetries of R_ijkl
  double bianchi = 0.0;        // first Bianchi identity
  double decomposition = 0.0;  // R − P∧g (the Weyl part)
  double cotton_trace = 0.0;   // g^ij C_ijk
  double star_symmetry = 0.0;  // *C − *Cᵀ
  double star_trace = 0.0;     // g^ij (*C)_ij
  double star_inverse = 0.0;   // C_ijk − (*C)_il ε^l_jk

  double max() const {
    return std::max({symmetries, bianchi, decomposition, cotton_trace, star_symmetry, star_trace, star_inverse});
  }
};

inline CurvatureIdentities curvature_identities(const TensorPack& t) {
  CurvatureIdentities r;
  const Mat3& P = t.schouten;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) {
          const double R = t.riemann(i, j, k, l);
          r.symmetries = std::max({r.symmetries, std::abs(R + t.riemann(j, i, k, l)),
                                   std::abs(R + t.riemann(i, j, l, k)), std::abs(R - t.riemann(k, l, i, j))});
          r.bianchi = std::max(r.bianchi, std::abs(R + t.riemann(j, k, i, l) + t.riemann(k, i, j, l)));
          const double pg = P(i, k) * t.g(j, l) - P(j, k) * t.g(i, l) + P(j, l) * t.g(i, k) - P(i, l) * t.g(j, k);
          r.decomposition = std::max(r.decomposition, std::abs(R - pg));
        }
  for (int k = 0; k < 3; ++k) {
    double s = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) s += t.ginv(i, j) * t.cotton(i, j, k);
    r.cotton_trace = std::max(r.cotton_trace, std::abs(s));
  }
  r.star_symmetry = max_abs(t.star_cotton - transpose(t.star_cotton));
  r.star_trace = std::abs(detail::trace_with(t.ginv, t.star_cotton));
  Tensor3 e_mixed;  // ε^l_jk
  for (int l = 0; l < 3; ++l)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int m = 0; m < 3; ++m) e_mixed(l, j, k) += t.ginv(l, m) * t.eps(m, j, k);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) {
        double c = 0.0;
        for (int l = 0; l < 3; ++l) c += t.star_cotton(i, l) * e_mixed(l, j, k);
        r.star_inverse = std::max(r.star_inverse, std::abs(t.cotton(i, j, k) - c));
      }
  return r;
}

/// Chart for ĝ = e^{2Υ} g. The derivative mode of `chart` is kept; an
/// analytic chart requires a differentiable Υ.
inline MetricChart conformal_rescale(const MetricChart& chart, const ScalarField& upsilon) {
  const std::string name = "exp(2*" + upsilon.name + ")*" + chart.name();
  auto base_g = chart.metric_fn();
  auto ups = upsilon.value;
  MetricChart::MetricFn g = [base_g, ups](const Vec3& x) {
    return std::exp(2.0 * ups(x)) * base_g(x);
  };
  if (chart.mode() == DerivativeMode::central_difference) {
    return MetricChart::differenced(name, chart.domain(), g, chart.steps(), chart.orientation());
  }
  if (!upsilon.differentiable()) {
    throw InputError("conformal factor '" + upsilon.name +
                     "' has no derivatives; analytic charts need a differentiable factor");
  }
  auto base_jet = chart.jet_fn();
  auto ujet = upsilon.jet;
  MetricChart::JetFn jet = [base_jet, ujet](const Vec3& x, int order) {
    const MetricJet b = base_jet(x, order);
    const ScalarJet u = ujet(x, order);
    // f = e^{2Υ} and its partials
    const double f = std::exp(2.0 * u.value);
    Vec3 f1;
    Mat3 f2;
    std::array<Mat3, 3> f3{};
    for (int i = 0; i < 3; ++i) f1[i] = 2.0 * u.d[i] * f;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) f2(i, j) = (2.0 * u.d2(i, j) + 4.0 * u.d[i] * u.d[j]) * f;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k)
          f3[i](j, k) = (2.0 * u.d3[i](j, k) + 4.0 * u.d2(i, k) * u.d[j] + 4.0 * u.d[i] * u.d2(j, k) +
                         2.0 * u.d[k] * (2.0 * u.d2(i, j) + 4.0 * u.d[i] * u.d[j])) *
                        f;
    MetricJet r;
    r.order = order;
    r.g = f * b.g;
    if (order >= 1)
      for (int i = 0; i < 3; ++i) r.dg[i] = f1[i] * b.g + f * b.dg[i];
    if (order >= 2)
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
          r.d2g[i][j] = f2(i, j) * b.g + f1[i] * b.dg[j] + f1[j] * b.dg[i] + f * b.d2g[i][j];
    if (order >= 3)
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
          for (int k = 0; k < 3; ++k)
            r.d3g[i][j][k] = f3[i](j, k) * b.g + f2(i, j) * b.dg[k] + f2(i, k) * b.dg[j] +
                             f2(j, k) * b.dg[i] + f1[i] * b.d2g[j][k] + f1[j] * b.d2g[i][k] +
                             f1[k] * b.d2g[i][j] + f * b.d3g[i][j][k];
    return r;
  };
  return MetricChart::analytic(name, chart.domain(), g, jet, chart.orientation());
}

}  // namespace confgeo
