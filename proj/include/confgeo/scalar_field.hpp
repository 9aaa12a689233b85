#pragma once

#include <functional>
#include <string>
#include <utility>

#include "confgeo/chart.hpp"

namespace confgeo {

/// A scalar function and its partials up to `order`.
struct ScalarJet {
  int order = 0;
  double value = 0.0;
  Vec3 d{};
  Mat3 d2{};
  std::array<Mat3, 3> d3{};  // d3[i](j, k) = d_i d_j d_k f
};

/// Smooth scalar function on coordinates, e.g. a conformal factor exponent.
/// `jet` may be empty when only values are known; such a field can only be
/// used with charts in central-difference mode.
struct ScalarField {
  std::string name;
  std::function<double(const Vec3&)> value;
  std::function<ScalarJet(const Vec3&, int)> jet;

  bool differentiable() const { return static_cast<bool>(jet); }
};

namespace detail {

template <class F>
struct ScalarAsMatrix {
  F f;
  template <class S>
  Mat3T<S> operator()(const Vec3T<S>& x) const {
    Mat3T<S> m;
    m(0, 0) = f(x);
    return m;
  }
};

}  // namespace detail

template <class F>
ScalarJet scalar_jet_from_functor(const F& f, const Vec3& x, int order) {
  const MetricJet mj = jet_from_functor(detail::ScalarAsMatrix<F>{f}, x, order);
  ScalarJet j;
  j.order = order;
  j.value = mj.g(0, 0);
  for (int i = 0; i < 3; ++i) {
    j.d[i] = mj.dg[i](0, 0);
    for (int k = 0; k < 3; ++k) {
      j.d2(i, k) = mj.d2g[i][k](0, 0);
      for (int l = 0; l < 3; ++l) j.d3[i](k, l) = mj.d3g[i][k][l](0, 0);
    }
  }
  return j;
}

/// Scalar field from a templated functor `template <class S> S operator()(const Vec3T<S>&)`.
template <class F>
ScalarField make_scalar_field(std::string name, F f) {
  ScalarField s;
  s.name = std::move(name);
  s.value = [f](const Vec3& x) { return f(x); };
  s.jet = [f](const Vec3& x, int order) { return scalar_jet_from_functor(f, x, order); };
  return s;
}

}  // namespace confgeo
