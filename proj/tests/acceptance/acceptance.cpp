// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "test_support.hpp"

using namespace confgeo;
using testing_support::random_point;
using testing_support::random_vector;

namespace {

constexpr double pi = std::numbers::pi;

struct Outcome {
  bool passed = true;
  std::string detail;
};

struct Criterion {
  int id;
  std::string title;
  double budget_s;
  std::function<Outcome()> body;
};

std::string sci(double v) {
  char b[32];
  std::snprintf(b, sizeof b, "%.2e", v);
  return b;
}

/// Tracks the worst value of a quantity against a bound.
struct Bound {
  std::string name;
  double bound;
  bool lower = false;  // value must exceed the bound
  double worst = 0.0;
  bool seen = false;

  void add(double v) {
    if (!seen) worst = v;
    else worst = lower ? std::min(worst, v) : std::max(worst, v);
    seen = true;
  }
  bool ok() const { return seen && (lower ? worst > bound : worst < bound); }
  std::string str() const { return name + "=" + sci(worst) + (lower ? ">" : "<") + sci(bound); }
};

Outcome combine(std::initializer_list<const Bound*> bs, bool extra = true, const std::string& note = {}) {
  Outcome o;
  o.passed = extra;
  for (const Bound* b : bs) {
    o.passed = o.passed && b->ok();
    o.detail += (o.detail.empty() ? "" : " ") + b->str();
  }
  if (!note.empty()) o.detail += " " + note;
  return o;
}

std::vector<MetricChart> registry_charts() {
  std::vector<MetricChart> charts;
  for (const auto& e : metric_entries())
    for (const char* u : {"none", "linear", "quadratic", "sinusoidal"}) {
      MetricSpec s;
      s.name = e.name;
      s.upsilon = u;
      charts.push_back(make_metric(s));
    }
  return charts;
}

double half_width(const MetricChart& c) { return std::min(0.4, 0.8 * c.domain().hi[0]); }

curves::Trigonometric random_trig(std::mt19937_64& rng, double amp) {
  std::normal_distribution<double> n(0.0, 1.0);
  curves::Trigonometric c;
  c.x0 = random_point(rng, 0.1);
  c.d = random_vector(rng);
  c.d = (0.3 / coord_norm(c.d)) * c.d;
  for (int m = 0; m < 3; ++m)
    for (int i = 0; i < 3; ++i) {
      c.A[m][i] = amp * n(rng) / (m + 1);
      c.B[m][i] = amp * n(rng) / (m + 1);
    }
  return c;
}

NullFrameState random_null_state(const MetricChart& chart, std::mt19937_64& rng, double half) {
  std::normal_distribution<double> n(0.0, 1.0);
  NullFrameState s;
  s.point.x = random_point(rng, half);
  s.point.zeta = random_null_vector(point_geometry(chart, s.point.x), rng);
  s.c0 = 1.0 + 0.2 * n(rng);
  s.c1 = Complex(0.5 * n(rng), 0.5 * n(rng));
  s.u2 = Complex(0.5 * n(rng), 0.5 * n(rng));
  s.u3 = -2.0 * (s.c1 * std::conj(s.u2)).real() / s.c0;
  return s;
}

// Same coordinate 2-jet in both charts.
CurveState matched(const MetricChart& from, const MetricChart& to, const CurveState& s) {
  const Vec3 xdd = coordinate_acceleration(point_geometry(from, s.x), s);
  return {s.x, s.v, xdd + point_geometry(to, s.x).gamma_contract(s.v, s.v)};
}

// ---------------------------------------------------------------------------

Outcome crit_tensor_identities() {
  std::mt19937_64 rng(1001);
  Bound analytic{"analytic", 1e-5}, difference{"difference", 1e-3};
  const ScalarField ups = make_upsilon("sinusoidal");
  const auto charts = registry_charts();
  int evaluated = 0;
  for (int n = 0; n < 100; ++n) {
    const MetricChart& base = charts[n % charts.size()];
    const Vec3 x = random_point(rng, half_width(base));
    for (int mode = 0; mode < 2; ++mode) {
      const MetricChart c = mode == 0 ? base : base.as_differenced();
      const TensorPack t = evaluate(c, x);
      const TensorPack th = evaluate(conformal_rescale(c, ups), x);
      double inv = 0.0;
      for (int k = 0; k < 27; ++k) inv = std::max(inv, std::abs(t.cotton.v[k] - th.cotton.v[k]));
      const double r = std::max(curvature_identities(t).max(), inv);
      (mode == 0 ? analytic : difference).add(r);
      ++evaluated;
    }
  }
  return combine({&analytic, &difference}, true, "(" + std::to_string(evaluated / 2) + " points, " +
                                                     std::to_string(charts.size()) + " charts)");
}

Outcome crit_euclidean_circles() {
  std::mt19937_64 rng(1002);
  std::uniform_real_distribution<double> kappa(0.5, 3.0);
  const MetricChart c = make_metric("euclidean");
  Bound fit{"circle_fit", 1e-6};
  bool complete = true;
  for (int n = 0; n < 20; ++n) {
    CurveState s0{random_point(rng, 0.5), random_vector(rng), random_vector(rng)};
    // curvature in [0.5, 3] keeps the circle inside the chart; the last two jets are lines
    const double vv = coord_dot(s0.v, s0.v);
    const Vec3 along = (coord_dot(s0.a, s0.v) / vv) * s0.v;
    const Vec3 normal = s0.a - along;
    s0.a = along + (n < 18 ? kappa(rng) * vv / coord_norm(normal) : 0.0) * normal;
    if (n >= 18) s0 = {s0.x, (1.0 / std::sqrt(vv)) * s0.v, (1.0 / vv) * along};  // lines
    const DiscreteCurve curve = integrate_cg(c, s0, 0.0, 2.0 * pi, {1e-3});
    complete = complete && curve.status == CurveStatus::complete;
    fit.add(oracle::circle_fit_deviation(testing_support::eigen_points(curve)));
  }
  return combine({&fit}, complete);
}

Outcome crit_conformal_invariance() {
  std::mt19937_64 rng(1003);
  const MetricChart flat = make_metric("euclidean");
  Bound h{"hausdorff", 1e-4};
  bool complete = true;
  for (const char* u : {"linear", "quadratic", "sinusoidal"}) {
    MetricSpec spec;
    spec.upsilon = u;
    const MetricChart hat = make_metric(spec);
    for (int n = 0; n < 3; ++n) {
      CurveState s0{random_point(rng, 0.3), random_vector(rng), random_vector(rng)};
      s0.v = (0.8 / coord_norm(s0.v)) * s0.v;
      const DiscreteCurve a = integrate_cg(flat, s0, 0.0, 2.0, {1e-3});
      const DiscreteCurve b = integrate_cg(hat, matched(flat, hat, s0), 0.0, 2.0, {1e-3});
      complete = complete && a.status == CurveStatus::complete && b.status == CurveStatus::complete;
      h.add(oracle::matched_hausdorff(testing_support::hermite(a), testing_support::hermite(b)));
    }
  }
  return combine({&h}, complete);
}

Outcome crit_chain_projection() {
  std::mt19937_64 rng(1004);
  Bound geo{"cg_residual", 1e-4}, speed{"speed_drift", 1e-6}, comp{"c0_c1_drift", 1e-6}, cons{"constraint_drift", 1e-6};
  bool complete = true;
  for (const char* name : {"euclidean", "round_sphere", "nil"}) {
    const MetricChart chart = make_metric(name);
    for (int n = 0; n < 20; ++n) {
      const NullFrameState s0 = random_null_state(chart, rng, 0.3);
      const NullGeodesic g = integrate_null_geodesic(chart, s0, 0.0, 1.0);
      complete = complete && g.status == CurveStatus::complete;
      const DiscreteCurve c = projected_curve(chart, g);
      geo.add(is_conformal_geodesic(chart, c, 1e-4).max_residual);
      std::vector<Vec3> xs;
      for (const auto& st : g.states) xs.push_back(st.point.x);
      const double h = c.uniform_step();
      double s_first = 0.0, s_drift = 0.0, c_drift = 0.0, k_drift = 0.0;
      for (std::size_t i = 0; i < g.states.size(); ++i) {
        const NullFrameState& st = g.states[i];
        const PointGeometry pg = point_geometry(chart, st.point.x);
        const Vec3 xdot = detail::stencil_derivative(xs, i, h);
        const double sp = pg.norm(xdot);
        if (i == 0) s_first = sp;
        s_drift = std::max(s_drift, std::abs(sp - s_first));
        const double c0 = pg.inner(eta(pg, st.point.zeta), xdot);
        const Complex c1 = pg.inner(st.point.zeta, xdot);
        c_drift = std::max({c_drift, std::abs(c0 - s0.c0), std::abs(c1 - s0.c1)});
        k_drift = std::max({k_drift, std::abs(nullity(st.components())), cone_residuals(pg, st.point.zeta).max()});
      }
      speed.add(s_drift);
      comp.add(c_drift);
      cons.add(k_drift);
    }
  }
  return combine({&geo, &speed, &comp, &cons}, complete, "(60 states)");
}

Outcome crit_canonical_lift() {
  std::mt19937_64 rng(1005);
  Bound chain{"cg_lift_residual", 1e-5}, helix{"helix_lift_residual", 1e-2, true};
  bool complete = true;
  for (const auto& chart : registry_charts()) {
    CurveState s0{random_point(rng, std::min(0.2, 0.4 * chart.domain().hi[0])), random_vector(rng), random_vector(rng)};
    s0.v = (0.5 / coord_norm(s0.v)) * s0.v;
    s0.a = (0.5 / coord_norm(s0.a)) * s0.a;
    const DiscreteCurve c = integrate_cg(chart, s0, 0.0, 0.6, {1e-3});
    complete = complete && c.status == CurveStatus::complete;
    chain.add(canonical_chain_lift(chart, c).max_residual);
  }
  const MetricChart flat = make_metric("euclidean");
  for (double pitch : {0.3, 1.0}) {
    const DiscreteCurve h = sample_curve(flat, make_parametric(curves::Helix{1.0, pitch}), 0.0, 2.0 * pi, 2000);
    helix.add(canonical_chain_lift(flat, h).max_residual);
  }
  return combine({&chain, &helix}, complete);
}

Outcome crit_fefferman_tables() {
  std::mt19937_64 rng(1006);
  Bound tables{"table_consistency", 1e-12}, scalar{"scalar", 1e-300}, ricci{"ricci_vs_2P", 1e-12};
  std::string verdicts;
  bool verdicts_ok = true;
  struct Case {
    const char* name;
    const char* upsilon;
    bool flat;
  };
  for (const Case& k : {Case{"euclidean", "none", true}, Case{"euclidean", "sinusoidal", true},
                        Case{"round_sphere", "none", true}, Case{"hyperbolic", "none", true}, Case{"nil", "none", false}}) {
    MetricSpec spec;
    spec.name = k.name;
    spec.upsilon = k.upsilon;
    const MetricChart chart = make_metric(spec);
    std::vector<Vec3> pts;
    for (int n = 0; n < 10; ++n) pts.push_back(random_point(rng, half_width(chart)));
    const FlatnessReport f = conformal_flatness_check(chart, pts, 4, 1e-8, 7);
    const bool ok = f.conformally_flat == k.flat && f.consistent;
    verdicts_ok = verdicts_ok && ok;
    verdicts += std::string(verdicts.empty() ? "" : ",") + chart.name() + "=" + (f.conformally_flat ? "flat" : "curved");
    for (const Vec3& x : pts) {
      const TensorPack t = evaluate(chart, x);
      PointGeometry pg;
      pg.g = t.g;
      pg.ginv = t.ginv;
      pg.eps = t.eps;
      const CVec3 z = random_null_vector(pg, rng);
      const FeffermanCurvatureReport r = fefferman_curvature(t, z);
      tables.add(std::max(r.ricci_consistency, r.weyl_consistency));
      scalar.add(std::abs(r.scalar));
      const Vec3 e = eta(pg, z);
      const CVec3 zb = conj(z), ec = complexify(e);
      const double d = std::max({std::abs(r.ricci_00 - 2.0 * contract(t.schouten, e, e)),
                                 std::abs(r.ricci_01 - 2.0 * contract(t.schouten, zb, ec)),
                                 std::abs(r.ricci_11 - 2.0 * contract(t.schouten, zb, zb)),
                                 std::abs(r.ricci_11b - 2.0 * contract(t.schouten, z, zb)),
                                 std::abs(r.ricci_22b - 1.0), std::abs(r.ricci_33 - 1.0)});
      ricci.add(d);
    }
  }
  scalar.bound = 1e-300;
  const bool exact_zero = scalar.worst == 0.0;
  Outcome o = combine({&tables, &ricci}, verdicts_ok && exact_zero);
  o.detail += " scalar=" + sci(scalar.worst) + " " + verdicts;
  return o;
}

Outcome crit_total_torsion_check() {
  std::mt19937_64 rng(1007);
  Bound routes{"route_gap", 1e-6}, helix{"helix_error", 1e-5}, kropina{"L_minus_2T", 1e-6};
  const auto charts = registry_charts();
  for (int n = 0; n < 20; ++n) {
    const MetricChart& chart = charts[n % charts.size()];
    const DiscreteCurve c = sample_curve(chart, make_parametric(random_trig(rng, 0.1)), 0.0, 1.0, 1000);
    const PointGeometry pa = point_geometry(chart, c.s.front().x), pb = point_geometry(chart, c.s.back().x);
    std::uniform_real_distribution<double> ang(-pi, pi);
    const Frame A = adapted_frame(pa, c.s.front(), random_vector(rng), ang(rng));
    const Frame B = adapted_frame(pb, c.s.back(), random_vector(rng), ang(rng));
    routes.add(total_torsion(chart, c, A, B).discrepancy());
    const FramePath p = section_along(chart, c);
    const double T = total_torsion_monodromy(chart, c, p.frames.front(), p.frames.back());
    kropina.add(std::abs(angle_difference(kropina_functional(p), 2.0 * T)));
  }
  const MetricChart flat = make_metric("euclidean");
  for (auto [a, pitch] : {std::pair{1.0, 0.5}, std::pair{0.8, 0.6}, std::pair{0.5, 1.5}}) {
    const DiscreteCurve h = sample_curve(flat, make_parametric(curves::Helix{a, pitch}), 0.0, 2.0 * pi, 4000);
    const Frame A = frenet_frame(point_geometry(flat, h.s.front().x), h.s.front());
    const Frame B = frenet_frame(point_geometry(flat, h.s.back().x), h.s.back());
    const double expected = -2.0 * pi * pitch / std::sqrt(a * a + pitch * pitch);
    helix.add(std::abs(angle_difference(total_torsion(flat, h, A, B).monodromy, expected)));
  }
  return combine({&routes, &helix, &kropina});
}

Outcome crit_variational() {
  Bound critical{"critical_grad", 1e-4}, helix{"helix_grad", 1e-2, true}, vertical{"vertical", 1e-6},
      prediction{"fd_vs_integral", 1e-2};
  const MetricChart flat = make_metric("euclidean");
  const MetricChart sphere = make_metric("round_sphere");
  auto run = [&](const MetricChart& chart, const ParametricCurve& f, double t0, double t1, Bound* grad) {
    const DiscreteCurve c = sample_curve(chart, f, t0, t1, 600);
    const FunctionalReport r = variational_check(chart, c);
    if (grad) grad->add(r.max_grad);
    vertical.add(r.max_vertical);
    prediction.add(r.relative_prediction_error());
  };
  run(flat, make_parametric(curves::Circle{1.0, {}}), 0.0, 3.0, &critical);
  run(flat, make_parametric(curves::Circle{0.6, {{0.2, -0.1, 0.3}}}), 0.0, 5.0, &critical);
  // lines through the origin and the unit circle are great circles of the sphere chart
  run(sphere, make_parametric(curves::Line{{}, {{0.6, 0.0, 0.8}}}), -1.0, 1.0, &critical);
  run(sphere, make_parametric(curves::Circle{1.0, {}}), 0.0, 3.0, &critical);
  run(flat, make_parametric(curves::Helix{1.0, 0.5}), 0.0, 3.0, &helix);
  run(flat, make_parametric(curves::Helix{0.7, 1.2}), 0.0, 2.0, &helix);
  std::mt19937_64 rng(1008);
  MetricSpec spec;
  spec.name = "nil";
  spec.upsilon = "sinusoidal";
  run(make_metric(spec), make_parametric(random_trig(rng, 0.2)), 0.0, 1.0, nullptr);
  return combine({&critical, &helix, &vertical, &prediction});
}

Outcome crit_gradient_identity() {
  // T×∇∇T + (*R)(T)T on the exact jerk against T×(∇∇T − P(T)) on the
  // jerk differenced from the sampled accelerations
  std::mt19937_64 rng(1009);
  const double h = 1e-2;
  Bound mismatch{"mismatch", 10.0 * h * h};
  for (const auto& chart : registry_charts()) {
    const DiscreteCurve exact = sample_curve(chart, make_parametric(random_trig(rng, 0.1)), 0.0, 1.0, 100);
    DiscreteCurve fd = exact;
    fd.jerk.clear();
    ensure_jerk(chart, fd);
    for (std::size_t i = 0; i < exact.size(); ++i) {
      const TorsionGradient a = torsion_gradient(chart, exact.s[i], exact.jerk[i]);
      const TorsionGradient b = torsion_gradient(chart, fd.s[i], fd.jerk[i]);
      mismatch.add(max_abs(a.star_form - b.schouten_form));
    }
  }
  return combine({&mismatch});
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "tensor identities", 10.0, crit_tensor_identities},
      {2, "euclidean conformal geodesics are circles", 5.0, crit_euclidean_circles},
      {3, "conformal invariance of conformal geodesics", 5.0, crit_conformal_invariance},
      {4, "null geodesics project to conformal geodesics", 30.0, crit_chain_projection},
      {5, "canonical lift", 10.0, crit_canonical_lift},
      {6, "fefferman curvature and flatness", 10.0, crit_fefferman_tables},
      {7, "total torsion", 10.0, crit_total_torsion_check},
      {8, "variational characterization", 60.0, crit_variational},
      {9, "gradient identity", 5.0, crit_gradient_identity},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.body();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = s < c.budget_s;
    const bool ok = o.passed && in_time;
    failures += !ok;
    std::printf("%s %d %s: %s time=%.2fs%s%.0fs\n", ok ? "PASS" : "FAIL", c.id, c.title.c_str(), o.detail.c_str(), s,
                in_time ? "<" : ">=", c.budget_s);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
