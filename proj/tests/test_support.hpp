#pragma once

#include <random>

#include "confgeo/confgeo.hpp"
#include "confgeo/conformal_geodesic.hpp"
#include "oracles.hpp"

namespace testing_support {

inline oracle::Vec to_eigen(const confgeo::Vec3& v) { return {v[0], v[1], v[2]}; }
inline confgeo::Vec3 from_eigen(const oracle::Vec& v) { return {{v[0], v[1], v[2]}}; }

inline oracle::Mat to_eigen(const confgeo::Mat3& m) {
  oracle::Mat r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r(i, j) = m(i, j);
  return r;
}

/// Raw metric components of a chart as an oracle function.
inline oracle::MatFn components(const confgeo::MetricChart& chart) {
  auto g = chart.metric_fn();
  return [g](const oracle::Vec& x) { return to_eigen(g(from_eigen(x))); };
}

inline confgeo::Vec3 random_point(std::mt19937_64& rng, double half) {
  std::uniform_real_distribution<double> u(-half, half);
  return {{u(rng), u(rng), u(rng)}};
}

inline confgeo::Vec3 random_vector(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  return {{n(rng), n(rng), n(rng)}};
}

inline oracle::HermiteCurve hermite(const confgeo::DiscreteCurve& c) {
  oracle::HermiteCurve h;
  for (std::size_t i = 0; i < c.size(); ++i) {
    h.t.push_back(c.t[i]);
    h.x.push_back(to_eigen(c.s[i].x));
    h.v.push_back(to_eigen(c.s[i].v));
  }
  return h;
}

inline std::vector<oracle::Vec> eigen_points(const confgeo::DiscreteCurve& c) {
  std::vector<oracle::Vec> p;
  for (const auto& s : c.s) p.push_back(to_eigen(s.x));
  return p;
}

}  // namespace testing_support
