#pragma once

#include <array>
#include <functional>
#include <sstream>
#include <string>
#include <utility>

#include "confgeo/dual.hpp"
#include "confgeo/errors.hpp"
#include "confgeo/linalg.hpp"

namespace confgeo {

/// Metric components and their coordinate partials at a point, up to `order`.
/// dg[i] = d_i g, d2g[i][j] = d_i d_j g, d3g[i][j][k] = d_i d_j d_k g.
struct MetricJet {
  int order = 0;
  Mat3 g;
  std::array<Mat3, 3> dg{};
  std::array<std::array<Mat3, 3>, 3> d2g{};
  std::array<std::array<std::array<Mat3, 3>, 3>, 3> d3g{};
};

/// Open coordinate box lo < x < hi.
struct Box {
  Vec3 lo{{-1e300, -1e300, -1e300}};
  Vec3 hi{{1e300, 1e300, 1e300}};

  bool contains(const Vec3& x) const {
    for (int i = 0; i < 3; ++i)
      if (!(x[i] > lo[i] && x[i] < hi[i])) return false;
    return true;
  }
};

enum class DerivativeMode { analytic, central_difference };

/// Steps for central differencing. `first` and `second` act directly on g;
/// `third` is the outer step applied to second derivatives.
struct DifferenceSteps {
  double first = 1e-4;
  double second = 1e-4;
  double third = 1e-3;
};

// Exact partials of a templated metric functor F via nested duals.
// F must provide `template <class S> Mat3T<S> operator()(const Vec3T<S>&) const`.
template <class F>
MetricJet jet_from_functor(const F& f, const Vec3& x, int order) {
  MetricJet j;
  j.order = order;
  if (order <= 0) {
    j.g = f(x);
    return j;
  }
  if (order == 1) {
    using D1 = Dual<double>;
    for (int i = 0; i < 3; ++i) {
      Vec3T<D1> xs;
      for (int m = 0; m < 3; ++m) xs[m] = D1(x[m], m == i ? 1.0 : 0.0);
      const auto r = f(xs);
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
          j.g(a, b) = r(a, b).re;
          j.dg[i](a, b) = r(a, b).eps;
        }
    }
    return j;
  }
  if (order == 2) {
    using D1 = Dual<double>;
    using D2 = Dual<D1>;
    for (int i = 0; i < 3; ++i)
      for (int k = i; k < 3; ++k) {
        Vec3T<D2> xs;
        for (int m = 0; m < 3; ++m)
          xs[m] = D2(D1(x[m], m == k ? 1.0 : 0.0), D1(m == i ? 1.0 : 0.0, 0.0));
        const auto r = f(xs);
        for (int a = 0; a < 3; ++a)
          for (int b = 0; b < 3; ++b) {
            const auto& v = r(a, b);
            j.g(a, b) = v.re.re;
            j.dg[i](a, b) = v.eps.re;
            j.dg[k](a, b) = v.re.eps;
            j.d2g[i][k](a, b) = v.eps.eps;
            j.d2g[k][i](a, b) = v.eps.eps;
          }
      }
    return j;
  }
  using D1 = Dual<double>;
  using D2 = Dual<D1>;
  using D3 = Dual<D2>;
  for (int i = 0; i < 3; ++i)
    for (int jj = i; jj < 3; ++jj)
      for (int k = jj; k < 3; ++k) {
        Vec3T<D3> xs;
        for (int m = 0; m < 3; ++m) {
          const D2 inner(D1(x[m], m == k ? 1.0 : 0.0), D1(m == jj ? 1.0 : 0.0, 0.0));
          const D2 outer(D1(m == i ? 1.0 : 0.0, 0.0), D1(0.0, 0.0));
          xs[m] = D3(inner, outer);
        }
        const auto r = f(xs);
        const int idx[3] = {i, jj, k};
        for (int a = 0; a < 3; ++a)
          for (int b = 0; b < 3; ++b) {
            const auto& v = r(a, b);
            j.g(a, b) = v.re.re.re;
            j.dg[i](a, b) = v.eps.re.re;
            j.dg[jj](a, b) = v.re.eps.re;
            j.dg[k](a, b) = v.re.re.eps;
            j.d2g[i][jj](a, b) = j.d2g[jj][i](a, b) = v.eps.eps.re;
            j.d2g[i][k](a, b) = j.d2g[k][i](a, b) = v.eps.re.eps;
            j.d2g[jj][k](a, b) = j.d2g[k][jj](a, b) = v.re.eps.eps;
            const double t = v.eps.eps.eps;
            // all permutations of (i, jj, k)
            static constexpr int perm[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                               {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
            for (const auto& p : perm) j.d3g[idx[p[0]]][idx[p[1]]][idx[p[2]]](a, b) = t;
          }
      }
  return j;
}

/// A single coordinate chart carrying a Riemannian 3-metric.
///
/// Values are immutable after construction and every member is const, so a
/// chart can be shared freely between threads. Each metric evaluation checks
/// that the point is in the domain and that g is positive definite.
class MetricChart {
 public:
  using MetricFn = std::function<Mat3(const Vec3&)>;
  using JetFn = std::function<MetricJet(const Vec3&, int)>;

  /// Chart whose partials come from `jet` (exact derivatives).
  static MetricChart analytic(std::string name, Box domain, MetricFn g, JetFn jet,
                              int orientation = +1) {
    MetricChart c(std::move(name), domain, std::move(g), orientation);
    c.mode_ = DerivativeMode::analytic;
    c.jet_ = std::move(jet);
    return c;
  }

  /// Chart built from a templated metric functor; partials are exact.
  template <class F>
  static MetricChart from_functor(std::string name, Box domain, F f, int orientation = +1) {
    return analytic(
        std::move(name), domain, [f](const Vec3& x) { return f(x); },
        [f](const Vec3& x, int order) { return jet_from_functor(f, x, order); }, orientation);
  }

  /// Chart whose partials are taken by central differences of `g`.
  static MetricChart differenced(std::string name, Box domain, MetricFn g,
                                 DifferenceSteps steps = {}, int orientation = +1) {
    MetricChart c(std::move(name), domain, std::move(g), orientation);
    c.mode_ = DerivativeMode::central_difference;
    c.steps_ = steps;
    return c;
  }

  const std::string& name() const { return name_; }
  const Box& domain() const { return domain_; }
  DerivativeMode mode() const { return mode_; }
  const DifferenceSteps& steps() const { return steps_; }
  int orientation() const { return orientation_; }
  bool contains(const Vec3& x) const { return domain_.contains(x); }

  const MetricFn& metric_fn() const { return g_; }
  const JetFn& jet_fn() const { return jet_; }

  /// Same chart with the opposite (or given) orientation sign.
  MetricChart with_orientation(int sign) const {
    MetricChart c = *this;
    c.orientation_ = sign >= 0 ? +1 : -1;
    return c;
  }

  /// Same metric with partials forced to central differences.
  MetricChart as_differenced(DifferenceSteps steps = {}) const {
    MetricChart c = *this;
    c.mode_ = DerivativeMode::central_difference;
    c.steps_ = steps;
    c.jet_ = nullptr;
    return c;
  }

  void require_inside(const Vec3& x) const {
    if (!contains(x)) {
      std::ostringstream os;
      os << "point (" << x[0] << ", " << x[1] << ", " << x[2] << ") is outside the domain of chart '"
         << name_ << "'";
      throw DomainError(os.str());
    }
  }

  /// g_ij(x); throws DomainError / MetricError.
  Mat3 metric(const Vec3& x) const {
    require_inside(x);
    return checked(x, g_(x));
  }

  /// Metric jet to the given order (0..3).
  MetricJet jet(const Vec3& x, int order) const {
    require_inside(x);
    if (mode_ == DerivativeMode::analytic) {
      MetricJet j = jet_(x, order);
      checked(x, j.g);
      return j;
    }
    return differenced_jet(x, order);
  }

 private:
  MetricChart(std::string name, Box domain, MetricFn g, int orientation)
      : name_(std::move(name)), domain_(domain), g_(std::move(g)),
        orientation_(orientation >= 0 ? +1 : -1) {}

  Mat3 checked(const Vec3& x, const Mat3& g) const {
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j)
        if (std::abs(g(i, j) - g(j, i)) > 1e-12 * (1.0 + std::abs(g(i, j)))) {
          throw MetricError("metric of chart '" + name_ + "' is not symmetric");
        }
    if (!is_positive_definite(g)) {
      std::ostringstream os;
      os << "metric of chart '" << name_ << "' is not positive definite at (" << x[0] << ", "
         << x[1] << ", " << x[2] << ")";
      throw MetricError(os.str());
    }
    return g;
  }

  // Stencil points may leave the box; only positive definiteness is checked there.
  Mat3 raw(const Vec3& x) const { return checked(x, g_(x)); }

  static Vec3 shifted(Vec3 x, int i, double h) {
    x[i] += h;
    return x;
  }
  static Vec3 shifted(Vec3 x, int i, double hi, int j, double hj) {
    x[i] += hi;
    x[j] += hj;
    return x;
  }

  std::array<std::array<Mat3, 3>, 3> second_partials(const Vec3& x, const Mat3& g0) const {
    const double h = steps_.second;
    std::array<std::array<Mat3, 3>, 3> d2;
    for (int i = 0; i < 3; ++i) {
      const Mat3 gp = raw(shifted(x, i, h));
      const Mat3 gm = raw(shifted(x, i, -h));
      d2[i][i] = (1.0 / (h * h)) * (gp - 2.0 * g0 + gm);
      for (int j = i + 1; j < 3; ++j) {
        const Mat3 pp = raw(shifted(x, i, h, j, h));
        const Mat3 pm = raw(shifted(x, i, h, j, -h));
        const Mat3 mp = raw(shifted(x, i, -h, j, h));
        const Mat3 mm = raw(shifted(x, i, -h, j, -h));
        d2[i][j] = (1.0 / (4.0 * h * h)) * (pp - pm - mp + mm);
        d2[j][i] = d2[i][j];
      }
    }
    return d2;
  }

  MetricJet differenced_jet(const Vec3& x, int order) const {
    MetricJet j;
    j.order = order;
    j.g = raw(x);
    if (order >= 1) {
      const double h = steps_.first;
      for (int i = 0; i < 3; ++i)
        j.dg[i] = (0.5 / h) * (raw(shifted(x, i, h)) - raw(shifted(x, i, -h)));
    }
    if (order >= 2) j.d2g = second_partials(x, j.g);
    if (order >= 3) {
      const double h = steps_.third;
      std::array<std::array<std::array<Mat3, 3>, 3>, 3> raw3;
      for (int k = 0; k < 3; ++k) {
        const Vec3 xp = shifted(x, k, h);
        const Vec3 xm = shifted(x, k, -h);
        const auto dp = second_partials(xp, raw(xp));
        const auto dm = second_partials(xm, raw(xm));
        for (int a = 0; a < 3; ++a)
          for (int b = 0; b < 3; ++b) raw3[a][b][k] = (0.5 / h) * (dp[a][b] - dm[a][b]);
      }
      // symmetrize over index permutations
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
          for (int c = 0; c < 3; ++c)
            j.d3g[a][b][c] = (1.0 / 6.0) * (raw3[a][b][c] + raw3[a][c][b] + raw3[b][a][c] +
                                            raw3[b][c][a] + raw3[c][a][b] + raw3[c][b][a]);
    }
    return j;
  }

  std::string name_;
  Box domain_;
  MetricFn g_;
  JetFn jet_;
  DerivativeMode mode_ = DerivativeMode::analytic;
  DifferenceSteps steps_{};
  int orientation_ = +1;
};

}  // namespace confgeo
