#pragma once

#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "confgeo/chart.hpp"
#include "confgeo/scalar_field.hpp"
#include "confgeo/tensors.hpp"

namespace confgeo {

namespace metrics {

struct Euclidean {
  template <class S>
  Mat3T<S> operator()(const Vec3T<S>&) const {
    return Mat3T<S>::identity();
  }
};

/// 4/(1 + k r²)² δ: constant sectional curvature k > 0.
struct RoundSphere {
  double k = 1.0;
  template <class S>
  Mat3T<S> operator()(const Vec3T<S>& x) const {
    const S d = 1.0 + k * (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
    const S f = 4.0 / (d * d);
    Mat3T<S> g;
    g(0, 0) = f;
    g(1, 1) = f;
    g(2, 2) = f;
    return g;
  }
};

/// 4/(1 − k r²)² δ: constant sectional curvature −k, k > 0, on r² < 1/k.
struct Hyperbolic {
  double k = 1.0;
  template <class S>
  Mat3T<S> operator()(const Vec3T<S>& x) const {
    const S d = 1.0 - k * (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
    const S f = 4.0 / (d * d);
    Mat3T<S> g;
    g(0, 0) = f;
    g(1, 1) = f;
    g(2, 2) = f;
    return g;
  }
};

/// dx² + dy² + (dz − x dy)²
struct Nil {
  template <class S>
  Mat3T<S> operator()(const Vec3T<S>& x) const {
    Mat3T<S> g;
    g(0, 0) = 1.0;
    g(1, 1) = 1.0 + x[0] * x[0];
    g(1, 2) = -x[0];
    g(2, 1) = -x[0];
    g(2, 2) = 1.0;
    return g;
  }
};

/// e^{2Υ} times a base metric functor.
template <class Base, class Upsilon>
struct Rescaled {
  Base base;
  Upsilon upsilon;
  template <class S>
  Mat3T<S> operator()(const Vec3T<S>& x) const {
    Mat3T<S> g = base(x);
    using std::exp;
    const S f = exp(2.0 * upsilon(x));
    g *= f;
    return g;
  }
};

}  // namespace metrics

namespace upsilons {

/// Υ = a·x
struct Linear {
  Vec3 a{{1.0, 0.0, 0.0}};
  template <class S>
  S operator()(const Vec3T<S>& x) const {
    return a[0] * x[0] + a[1] * x[1] + a[2] * x[2];
  }
};

/// Υ = q |x − c|²
struct Quadratic {
  double q = 0.1;
  Vec3 c{};
  template <class S>
  S operator()(const Vec3T<S>& x) const {
    const S d0 = x[0] - c[0];
    const S d1 = x[1] - c[1];
    const S d2 = x[2] - c[2];
    return q * (d0 * d0 + d1 * d1 + d2 * d2);
  }
};

/// Υ = A sin(w·x + φ)
struct Sinusoidal {
  double amplitude = 0.3;
  Vec3 w{{1.0, 2.0, -1.0}};
  double phase = 0.4;
  template <class S>
  S operator()(const Vec3T<S>& x) const {
    using std::sin;
    return amplitude * sin(w[0] * x[0] + w[1] * x[1] + w[2] * x[2] + phase);
  }
};

}  // namespace upsilons

/// Named parameters with defaults; unknown keys are rejected by the registry.
using Params = std::map<std::string, double>;

struct RegistryEntry {
  std::string name;
  std::string description;
  Params defaults;
};

inline const std::vector<RegistryEntry>& metric_entries() {
  static const std::vector<RegistryEntry> e = {
      {"euclidean", "flat metric δ on the box |x_i| < 10", {}},
      {"round_sphere", "4/(1+k r²)² δ, sectional curvature k > 0, box |x_i| < 10", {{"k", 1.0}}},
      {"hyperbolic", "4/(1-k r²)² δ, sectional curvature -k, box |x_i| < 0.5", {{"k", 1.0}}},
      {"nil", "dx² + dy² + (dz - x dy)², box |x_i| < 10", {}},
  };
  return e;
}

inline const std::vector<RegistryEntry>& upsilon_entries() {
  static const std::vector<RegistryEntry> e = {
      {"none", "Υ = 0", {}},
      {"linear", "Υ = a1 x1 + a2 x2 + a3 x3", {{"a1", 1.0}, {"a2", 0.0}, {"a3", 0.0}}},
      {"quadratic", "Υ = q |x - c|²", {{"q", 0.1}, {"c1", 0.0}, {"c2", 0.0}, {"c3", 0.0}}},
      {"sinusoidal",
       "Υ = A sin(w1 x1 + w2 x2 + w3 x3 + phase)",
       {{"A", 0.3}, {"w1", 1.0}, {"w2", 2.0}, {"w3", -1.0}, {"phase", 0.4}}},
  };
  return e;
}

/// Full description of a registry chart.
struct MetricSpec {
  std::string name = "euclidean";
  Params params;
  std::string upsilon = "none";
  Params upsilon_params;
  DerivativeMode mode = DerivativeMode::analytic;
  DifferenceSteps steps{};
  int orientation = +1;
};

namespace detail {

inline const RegistryEntry& find_entry(const std::vector<RegistryEntry>& list,
                                       const std::string& name, const std::string& what) {
  for (const auto& e : list)
    if (e.name == name) return e;
  std::ostringstream os;
  os << "unknown " << what << " '" << name << "' (known:";
  for (const auto& e : list) os << ' ' << e.name;
  os << ')';
  throw InputError(os.str());
}

inline Params resolve(const RegistryEntry& e, const Params& given) {
  Params p = e.defaults;
  for (const auto& [k, v] : given) {
    if (!e.defaults.count(k)) throw InputError("'" + e.name + "' has no parameter '" + k + "'");
    p[k] = v;
  }
  return p;
}

inline Box cube(double half) { return Box{{{-half, -half, -half}}, {{half, half, half}}}; }

template <class F>
MetricChart build(const std::string& name, Box box, F f, const MetricSpec& spec) {
  MetricChart c = MetricChart::from_functor(name, box, f, spec.orientation);
  return spec.mode == DerivativeMode::central_difference ? c.as_differenced(spec.steps) : c;
}

template <class Base>
MetricChart with_upsilon(const std::string& name, Box box, Base base, const MetricSpec& spec) {
  const Params u = resolve(find_entry(upsilon_entries(), spec.upsilon, "conformal factor"),
                           spec.upsilon_params);
  if (spec.upsilon == "none") return build(name, box, base, spec);
  const std::string full = "exp(2*" + spec.upsilon + ")*" + name;
  if (spec.upsilon == "linear") {
    upsilons::Linear f{{{u.at("a1"), u.at("a2"), u.at("a3")}}};
    return build(full, box, metrics::Rescaled<Base, upsilons::Linear>{base, f}, spec);
  }
  if (spec.upsilon == "quadratic") {
    upsilons::Quadratic f{u.at("q"), {{u.at("c1"), u.at("c2"), u.at("c3")}}};
    return build(full, box, metrics::Rescaled<Base, upsilons::Quadratic>{base, f}, spec);
  }
  upsilons::Sinusoidal f{u.at("A"), {{u.at("w1"), u.at("w2"), u.at("w3")}}, u.at("phase")};
  return build(full, box, metrics::Rescaled<Base, upsilons::Sinusoidal>{base, f}, spec);
}

}  // namespace detail

/// Chart for a registry metric, optionally rescaled by a registry Υ.
inline MetricChart make_metric(const MetricSpec& spec) {
  const Params p = detail::resolve(detail::find_entry(metric_entries(), spec.name, "metric"),
                                   spec.params);
  if (spec.name == "euclidean")
    return detail::with_upsilon("euclidean", detail::cube(10.0), metrics::Euclidean{}, spec);
  if (spec.name == "round_sphere") {
    if (!(p.at("k") > 0.0)) throw InputError("round_sphere needs k > 0");
    return detail::with_upsilon("round_sphere", detail::cube(10.0), metrics::RoundSphere{p.at("k")},
                                spec);
  }
  if (spec.name == "hyperbolic") {
    const double k = p.at("k");
    if (!(k > 0.0 && k < 4.0 / 3.0)) throw InputError("hyperbolic needs 0 < k < 4/3 on its box");
    return detail::with_upsilon("hyperbolic", detail::cube(0.5), metrics::Hyperbolic{k}, spec);
  }
  return detail::with_upsilon("nil", detail::cube(10.0), metrics::Nil{}, spec);
}

inline MetricChart make_metric(const std::string& name) {
  MetricSpec s;
  s.name = name;
  return make_metric(s);
}

/// Registry Υ as a differentiable scalar field.
inline ScalarField make_upsilon(const std::string& name, const Params& given = {}) {
  const Params u = detail::resolve(detail::find_entry(upsilon_entries(), name, "conformal factor"), given);
  if (name == "none") return make_scalar_field("none", [](const auto& x) { return 0.0 * x[0]; });
  if (name == "linear")
    return make_scalar_field(name, upsilons::Linear{{{u.at("a1"), u.at("a2"), u.at("a3")}}});
  if (name == "quadratic")
    return make_scalar_field(name,
                             upsilons::Quadratic{u.at("q"), {{u.at("c1"), u.at("c2"), u.at("c3")}}});
  return make_scalar_field(
      name, upsilons::Sinusoidal{u.at("A"), {{u.at("w1"), u.at("w2"), u.at("w3")}}, u.at("phase")});
}

}  // namespace confgeo
