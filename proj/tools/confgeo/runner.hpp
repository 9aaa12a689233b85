#pragma once

#include <algorithm>
#include <cstdio>
#include <limits>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "config.hpp"
#include "json.hpp"

namespace confgeo::cli {

struct Check {
  std::string name;
  double value = 0.0;
  std::string relation;  // "<", ">" or "=="
  double bound = 0.0;
  bool passed = false;
};

struct RunResult {
  std::string scenario;
  std::string metric;
  std::string status = "complete";
  std::string message;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  nlohmann::ordered_json summary = nlohmann::ordered_json::object();
  std::vector<Check> checks;

  bool passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
  }

  void below(const std::string& name, double value, double bound) {
    checks.push_back({name, value, "<", bound, value < bound});
  }
  void above(const std::string& name, double value, double bound) {
    checks.push_back({name, value, ">", bound, value > bound});
  }
  void holds(const std::string& name, bool ok) { checks.push_back({name, ok ? 1.0 : 0.0, "==", 1.0, ok}); }
};

namespace detail {

inline double auto_half_width(const MetricChart& c, double configured) {
  return configured > 0.0 ? configured : std::min(0.4, 0.8 * c.domain().hi[0]);
}

inline std::vector<Vec3> random_points(std::mt19937_64& rng, int n, double half) {
  std::uniform_real_distribution<double> u(-half, half);
  std::vector<Vec3> p(n);
  for (auto& x : p) x = {{u(rng), u(rng), u(rng)}};
  return p;
}

inline long intervals(const ScenarioConfig& c) {
  if (!(c.step > 0.0) || !(c.t1 > c.t0)) throw InputError("[integration] needs t1 > t0 and step > 0");
  return std::max(1L, std::lround((c.t1 - c.t0) / c.step));
}

inline curves::Trigonometric seeded_trig(const ScenarioConfig& c) {
  std::mt19937_64 rng(c.seed);
  std::normal_distribution<double> n(0.0, 1.0);
  curves::Trigonometric t;
  t.x0 = c.point;
  t.d = c.velocity;
  for (int m = 0; m < 3; ++m)
    for (int i = 0; i < 3; ++i) {
      t.A[m][i] = c.amplitude * n(rng) / (m + 1);
      t.B[m][i] = c.amplitude * n(rng) / (m + 1);
    }
  return t;
}

inline CurveState initial_state(const ScenarioConfig& c) { return {c.point, c.velocity, c.acceleration}; }

/// The curve named by [curve] source on the [integration] grid.
inline DiscreteCurve build_curve(const MetricChart& chart, const ScenarioConfig& c) {
  const long n = intervals(c);
  if (c.curve == "integrated") return integrate_cg(chart, initial_state(c), c.t0, c.t1, {c.step});
  ParametricCurve f;
  if (c.curve == "circle") f = make_parametric(curves::Circle{c.radius, c.center});
  else if (c.curve == "helix") f = make_parametric(curves::Helix{c.helix_a, c.helix_c});
  else if (c.curve == "line") f = make_parametric(curves::Line{c.line_point, c.line_direction});
  else if (c.curve == "twisted_cubic") f = make_parametric(curves::TwistedCubic{});
  else f = make_parametric(seeded_trig(c));
  const DiscreteCurve curve = sample_curve(chart, f, c.t0, c.t1, static_cast<int>(n));
  validate_curve(chart, curve);
  return curve;
}

inline void require_complete(RunResult& r, const DiscreteCurve& c) {
  r.status = to_string(c.status);
  r.message = c.message;
  r.holds("integration_complete", c.status == CurveStatus::complete);
}

inline std::vector<double> row_start(double t, const Vec3& x) { return {t, x[0], x[1], x[2]}; }

inline void push(std::vector<double>& row, const Vec3& v) { row.insert(row.end(), {v[0], v[1], v[2]}); }

inline void push(std::vector<double>& row, const CVec3& v) {
  for (int i = 0; i < 3; ++i) {
    row.push_back(v[i].real());
    row.push_back(v[i].imag());
  }
}

inline std::vector<std::string> base_columns() { return {"t", "x1", "x2", "x3"}; }

inline void add_columns(std::vector<std::string>& c, const std::string& stem, int n, bool complex = false) {
  for (int i = 1; i <= n; ++i) {
    if (complex) {
      c.push_back(stem + std::to_string(i) + "_re");
      c.push_back(stem + std::to_string(i) + "_im");
    } else {
      c.push_back(stem + std::to_string(i));
    }
  }
}

/// The initial null state, validated; errors name the [initial] section.
inline NullFrameState initial_null_state(const MetricChart& chart, const ScenarioConfig& c) {
  try {
    const PointGeometry pg = point_geometry(chart, c.point);
    NullFrameState s;
    s.point.x = c.point;
    s.point.zeta = null_vector_along(pg, c.direction, c.phase);
    s.c0 = c.c0;
    s.c1 = c.c1;
    s.u2 = c.u2;
    s.u3 = c.u3;
    validate_null_state(pg, s);
    return s;
  } catch (const Error& e) {
    throw InputError(std::string("[initial] ") + e.what());
  }
}

inline MetricChart chart_for(const ScenarioConfig& c) {
  try {
    return make_metric(c.metric);
  } catch (const InputError& e) {
    throw InputError(std::string("[metric] ") + e.what());
  }
}

inline Frame endpoint_frame(const ScenarioConfig& c, const PointGeometry& pg, const CurveState& s, double angle) {
  if (c.frames == "frenet") return frenet_frame(pg, s);
  return adapted_frame(pg, s, c.frame_seed, angle);
}

// ---------------------------------------------------------------------------

inline void run_tensors(const MetricChart& chart, const ScenarioConfig& c, RunResult& r) {
  std::mt19937_64 rng(c.seed);
  const auto pts = random_points(rng, c.points, auto_half_width(chart, c.half_width));
  const MetricChart hat = conformal_rescale(chart, make_upsilon(c.rescale));
  r.columns = base_columns();
  for (const char* n : {"scalar", "star_cotton_norm", "symmetries", "bianchi", "decomposition", "cotton_trace",
                        "star_symmetry", "star_trace", "star_inverse", "cotton_invariance"})
    r.columns.push_back(n);
  CurvatureIdentities worst;
  double invariance = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const TensorPack t = evaluate(chart, pts[i]);
    const TensorPack th = evaluate(hat, pts[i]);
    const CurvatureIdentities id = curvature_identities(t);
    double inv = 0.0;
    for (int k = 0; k < 27; ++k) inv = std::max(inv, std::abs(t.cotton.v[k] - th.cotton.v[k]));
    double n2 = 0.0;
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        for (int p = 0; p < 3; ++p)
          for (int q = 0; q < 3; ++q) n2 += t.ginv(a, p) * t.ginv(b, q) * t.star_cotton(a, b) * t.star_cotton(p, q);
    auto row = row_start(static_cast<double>(i), pts[i]);
    row.insert(row.end(), {t.scalar, std::sqrt(std::max(0.0, n2)), id.symmetries, id.bianchi, id.decomposition,
                           id.cotton_trace, id.star_symmetry, id.star_trace, id.star_inverse, inv});
    r.rows.push_back(std::move(row));
    worst.symmetries = std::max(worst.symmetries, id.symmetries);
    worst.bianchi = std::max(worst.bianchi, id.bianchi);
    worst.decomposition = std::max(worst.decomposition, id.decomposition);
    worst.cotton_trace = std::max(worst.cotton_trace, id.cotton_trace);
    worst.star_symmetry = std::max(worst.star_symmetry, id.star_symmetry);
    worst.star_trace = std::max(worst.star_trace, id.star_trace);
    worst.star_inverse = std::max(worst.star_inverse, id.star_inverse);
    invariance = std::max(invariance, inv);
  }
  const double tol = c.tolerance(c.metric.mode == DerivativeMode::analytic ? "identity" : "identity_difference");
  r.summary["points"] = pts.size();
  r.summary["rescale"] = c.rescale;
  r.summary["max_symmetries"] = worst.symmetries;
  r.summary["max_bianchi"] = worst.bianchi;
  r.summary["max_decomposition"] = worst.decomposition;
  r.summary["max_cotton_trace"] = worst.cotton_trace;
  r.summary["max_star_symmetry"] = worst.star_symmetry;
  r.summary["max_star_trace"] = worst.star_trace;
  r.summary["max_star_inverse"] = worst.star_inverse;
  r.summary["max_cotton_invariance"] = invariance;
  r.below("curvature_identities", worst.max(), tol);
  r.below("cotton_invariance", invariance, tol);
}

inline std::vector<double> geodesic_residuals(const MetricChart& chart, const DiscreteCurve& curve) {
  DiscreteCurve c = curve;
  c.jerk.clear();
  ensure_jerk(chart, c);
  std::vector<double> out(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    const PointGeometry pg = point_geometry(chart, c.s[i].x);
    const double v2 = pg.inner(c.s[i].v, c.s[i].v);
    out[i] = pg.norm(unparam_residual(pg, c.s[i], c.jerk[i])) / (v2 * v2);
  }
  return out;
}

inline void run_conformal_geodesic(const MetricChart& chart, const ScenarioConfig& c, RunResult& r) {
  const DiscreteCurve curve = integrate_cg(chart, initial_state(c), c.t0, c.t1, {c.step});
  require_complete(r, curve);
  r.columns = base_columns();
  add_columns(r.columns, "v", 3);
  add_columns(r.columns, "a", 3);
  r.columns.push_back("speed");
  r.columns.push_back("residual");
  const bool checkable = curve.size() >= 7;
  const std::vector<double> res = checkable ? geodesic_residuals(chart, curve) : std::vector<double>(curve.size(), 0.0);
  for (std::size_t i = 0; i < curve.size(); ++i) {
    auto row = row_start(curve.t[i], curve.s[i].x);
    push(row, curve.s[i].v);
    push(row, curve.s[i].a);
    row.push_back(point_geometry(chart, curve.s[i].x).norm(curve.s[i].v));
    row.push_back(res[i]);
    r.rows.push_back(std::move(row));
  }
  r.summary["samples"] = curve.size();
  r.summary["t_end"] = curve.t.back();
  if (checkable) {
    const GeodesicCheck g = is_conformal_geodesic(chart, curve, c.tolerance("geodesic"));
    r.summary["max_residual"] = g.max_residual;
    r.below("geodesic_residual", g.max_residual, c.tolerance("geodesic"));
  } else {
    r.holds("enough_samples", false);
  }
}

inline void run_null_geodesic(const MetricChart& chart, const ScenarioConfig& c, RunResult& r) {
  const NullFrameState s0 = initial_null_state(chart, c);
  NullGeodesicOptions opt;
  opt.step = c.step;
  const NullGeodesic g = integrate_null_geodesic(chart, s0, c.t0, c.t1, opt);
  r.status = to_string(g.status);
  r.message = g.message;
  r.holds("integration_complete", g.status == CurveStatus::complete);
  const DiscreteCurve curve = projected_curve(chart, g);

  r.columns = base_columns();
  add_columns(r.columns, "zeta", 3, true);
  for (const char* n : {"u2_re", "u2_im", "u3", "c0", "c1_re", "c1_im", "speed", "nullity", "cone_residual",
                        "constraint_residual"})
    r.columns.push_back(n);

  std::vector<Vec3> xs;
  for (const auto& st : g.states) xs.push_back(st.point.x);
  const double h = g.t.size() > 1 ? (g.t.back() - g.t.front()) / static_cast<double>(g.t.size() - 1) : 1.0;
  const bool differentiable = g.states.size() >= 5;
  double speed0 = 0.0, max_constraint = 0.0, max_speed_drift = 0.0, max_nullity = 0.0, max_cone = 0.0;
  double max_c_drift = 0.0;
  for (std::size_t i = 0; i < g.states.size(); ++i) {
    const NullFrameState& st = g.states[i];
    const PointGeometry pg = point_geometry(chart, st.point.x);
    const Vec3 xdot = differentiable ? confgeo::detail::stencil_derivative(xs, i, h) : project(pg, st).v;
    const double c0 = pg.inner(eta(pg, st.point.zeta), xdot);
    const Complex c1 = pg.inner(st.point.zeta, xdot);
    const double speed = pg.norm(xdot);
    if (i == 0) speed0 = speed;
    const double nul = nullity(st.components());
    const double cone = cone_residuals(pg, st.point.zeta).max();
    const double drift = std::max(std::abs(c0 - s0.c0), std::abs(c1 - s0.c1));
    const double cons = std::max({cone, std::abs(nul), drift});
    max_constraint = std::max(max_constraint, cons);
    max_speed_drift = std::max(max_speed_drift, std::abs(speed - speed0));
    max_nullity = std::max(max_nullity, std::abs(nul));
    max_cone = std::max(max_cone, cone);
    max_c_drift = std::max(max_c_drift, drift);
    auto row = row_start(g.t[i], st.point.x);
    push(row, st.point.zeta);
    row.insert(row.end(), {st.u2.real(), st.u2.imag(), st.u3, c0, c1.real(), c1.imag(), speed, nul, cone, cons});
    r.rows.push_back(std::move(row));
  }
  r.summary["samples"] = g.states.size();
  r.summary["max_renormalization"] = g.max_renormalization;
  r.summary["max_nullity"] = max_nullity;
  r.summary["max_cone_residual"] = max_cone;
  r.summary["max_conserved_drift"] = max_c_drift;
  r.summary["max_speed_drift"] = max_speed_drift;
  r.below("constraint_residual", max_constraint, c.tolerance("constraint"));
  r.below("speed_drift", max_speed_drift, c.tolerance("speed"));
  if (curve.size() >= 7) {
    const GeodesicCheck gc = is_conformal_geodesic(chart, curve, c.tolerance("geodesic"));
    r.summary["max_geodesic_residual"] = gc.max_residual;
    r.below("projection_is_conformal_geodesic", gc.max_residual, c.tolerance("geodesic"));
  } else {
    r.holds("enough_samples", false);
  }
}

inline void run_chain_lift(const MetricChart& chart, const ScenarioConfig& c, RunResult& r) {
  const DiscreteCurve curve = build_curve(chart, c);
  require_complete(r, curve);
  const ChainLift lift = canonical_chain_lift(chart, curve, c.phase);
  r.columns = base_columns();
  add_columns(r.columns, "zeta", 3, true);
  r.columns.insert(r.columns.end(), {"u2_re", "u2_im"});
  for (std::size_t i = 0; i < lift.states.size(); ++i) {
    auto row = row_start(lift.t[i], lift.states[i].point.x);
    push(row, lift.states[i].point.zeta);
    row.push_back(lift.states[i].u2.real());
    row.push_back(lift.states[i].u2.imag());
    r.rows.push_back(std::move(row));
  }
  r.summary["curve"] = c.curve;
  r.summary["lift_samples"] = lift.states.size();
  r.summary["max_residual"] = lift.max_residual;
  r.summary["worst_t"] = curve.t[lift.worst_index];
  if (c.expect == "not_chain") r.above("lift_residual", lift.max_residual, c.tolerance("not_chain"));
  else r.below("lift_residual", lift.max_residual, c.tolerance("chain"));
}

inline void run_flatness(const MetricChart& chart, const ScenarioConfig& c, RunResult& r) {
  std::mt19937_64 rng(c.seed);
  const auto pts = random_points(rng, c.points, auto_half_width(chart, c.half_width));
  const double tol = c.tolerance("flatness");
  r.columns = base_columns();
  r.columns.insert(r.columns.end(), {"star_cotton_norm", "max_weyl", "ricci_consistency", "weyl_consistency", "scalar"});
  double star = 0.0, weyl = 0.0, tables = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const FlatnessReport f = conformal_flatness_check(chart, {pts[i]}, c.draws, tol, c.seed + i);
    const PointGeometry pg = point_geometry(chart, pts[i]);
    const FeffermanCurvatureReport fc = fefferman_curvature(chart, {pts[i], random_null_vector(pg, rng)});
    const double tab = std::max({fc.ricci_consistency, fc.weyl_consistency, std::abs(fc.scalar)});
    star = std::max(star, f.max_star_cotton);
    weyl = std::max(weyl, f.max_weyl);
    tables = std::max(tables, tab);
    auto row = row_start(static_cast<double>(i), pts[i]);
    row.insert(row.end(), {f.max_star_cotton, f.max_weyl, fc.ricci_consistency, fc.weyl_consistency, std::abs(fc.scalar)});
    r.rows.push_back(std::move(row));
  }
  const bool flat = star < tol;
  const bool consistent = flat == (weyl < tol);
  r.summary["conformally_flat"] = flat;
  r.summary["consistent"] = consistent;
  r.summary["max_star_cotton"] = star;
  r.summary["max_weyl"] = weyl;
  r.summary["max_table_inconsistency"] = tables;
  r.holds("weyl_agrees_with_star_cotton", consistent);
  r.below("fefferman_tables", tables, c.tolerance("tables"));
  if (c.expect == "flat") r.holds("expected_flat", flat);
  if (c.expect == "not_flat") r.holds("expected_not_flat", !flat);
}

inline void run_total_torsion(const MetricChart& chart, const ScenarioConfig& c, RunResult& r) {
  const DiscreteCurve curve = build_curve(chart, c);
  require_complete(r, curve);
  const PointGeometry pa = point_geometry(chart, curve.s.front().x);
  const PointGeometry pb = point_geometry(chart, curve.s.back().x);
  const Frame A = endpoint_frame(c, pa, curve.s.front(), c.angle_a);
  const Frame B = endpoint_frame(c, pb, curve.s.back(), c.angle_b);
  const TotalTorsion tt = total_torsion(chart, curve, A, B);
  const NormalTransport tr = normal_transport(chart, curve, A.b[0]);

  const FramePath section = section_along(chart, curve);
  const double L = kropina_functional(section);
  const double Ts = total_torsion_monodromy(chart, curve, section.frames.front(), section.frames.back());
  const double kropina_gap = std::abs(angle_difference(L, 2.0 * Ts));

  r.columns = base_columns();
  add_columns(r.columns, "nu", 3);
  r.columns.push_back("kropina_integrand");
  const bool frenet = c.frames == "frenet";
  if (frenet) r.columns.push_back("tau");
  std::vector<double> tau_speed(curve.size());
  if (frenet && curve.has_jerk())
    for (std::size_t i = 0; i < curve.size(); ++i) {
      const PointGeometry pg = point_geometry(chart, curve.s[i].x);
      tau_speed[i] = torsion_function(pg, curve.s[i], curve.jerk[i]) * pg.norm(curve.s[i].v);
    }
  // the transported normal lives on every other sample
  for (std::size_t k = 0; k < tr.index.size(); ++k) {
    const std::size_t i = tr.index[k];
    auto row = row_start(curve.t[i], curve.s[i].x);
    push(row, tr.nu[k]);
    row.push_back(kropina_integrand(section.velocity[i]));
    if (frenet) row.push_back(tau_speed[i] / point_geometry(chart, curve.s[i].x).norm(curve.s[i].v));
    r.rows.push_back(std::move(row));
  }
  r.summary["curve"] = c.curve;
  r.summary["frames"] = c.frames;
  r.summary["monodromy"] = tt.monodromy;
  r.summary["integral"] = tt.integral;
  r.summary["discrepancy"] = tt.discrepancy();
  r.summary["max_transport_defect"] = tt.max_transport_defect;
  r.summary["kropina_length"] = L;
  r.summary["section_total_torsion"] = Ts;
  r.summary["kropina_gap"] = kropina_gap;
  r.below("route_agreement", tt.discrepancy(), c.tolerance("torsion"));
  r.below("kropina_equals_twice_torsion", kropina_gap, c.tolerance("torsion"));
  if (frenet && curve.has_jerk()) {
    const double frenet_value = wrap_angle(-simpson(tau_speed, curve.uniform_step()));
    r.summary["frenet_integral"] = frenet_value;
    r.below("frenet_agreement", std::abs(angle_difference(tt.monodromy, frenet_value)), c.tolerance("torsion"));
  }
}

inline void run_variational(const MetricChart& chart, const ScenarioConfig& c, RunResult& r) {
  const DiscreteCurve curve = build_curve(chart, c);
  require_complete(r, curve);
  VariationalOptions opt;
  opt.epsilon = c.epsilon;
  opt.modes = c.modes;
  const FunctionalReport rep = variational_check(chart, curve, opt);

  DiscreteCurve fd = curve;
  fd.jerk.clear();
  ensure_jerk(chart, fd);
  r.columns = base_columns();
  add_columns(r.columns, "density", 3);
  r.columns.insert(r.columns.end(), {"density_mismatch", "speed"});
  double mismatch = 0.0;
  for (std::size_t i = 0; i < curve.size(); ++i) {
    const PointGeometry pg = point_geometry(chart, curve.s[i].x);
    const TorsionGradient tg = torsion_gradient(chart, fd.s[i], fd.jerk[i]);
    mismatch = std::max(mismatch, tg.mismatch());
    auto row = row_start(curve.t[i], curve.s[i].x);
    push(row, tg.star_form);
    row.push_back(tg.mismatch());
    row.push_back(pg.norm(curve.s[i].v));
    r.rows.push_back(std::move(row));
  }
  const double h = curve.uniform_step();
  r.summary["curve"] = c.curve;
  r.summary["perturbations"] = rep.grad.size();
  r.summary["total_torsion"] = rep.value_T;
  r.summary["kropina_length"] = rep.value_L;
  r.summary["max_grad"] = rep.max_grad;
  r.summary["max_predicted"] = rep.max_predicted;
  r.summary["max_prediction_error"] = rep.max_prediction_error;
  r.summary["relative_prediction_error"] = rep.relative_prediction_error();
  r.summary["max_vertical"] = rep.max_vertical;
  r.summary["max_density_mismatch"] = mismatch;
  r.summary["grad"] = rep.grad;
  r.summary["predicted"] = rep.predicted;
  r.summary["vertical"] = rep.vertical;
  if (c.expect == "not_critical") r.above("max_grad", rep.max_grad, c.tolerance("not_critical"));
  else r.below("max_grad", rep.max_grad, c.tolerance("critical"));
  r.below("max_vertical", rep.max_vertical, c.tolerance("vertical"));
  r.below("relative_prediction_error", rep.relative_prediction_error(), c.tolerance("prediction"));
  r.below("gradient_identity", mismatch, c.tolerance("gradient_identity") * h * h);
}

inline void check_expect(const ScenarioConfig& c) {
  const std::string& e = c.expect;
  if (e == "auto") return;
  const bool ok = ((e == "flat" || e == "not_flat") && c.scenario == "flatness") ||
                  ((e == "chain" || e == "not_chain") && c.scenario == "chain_lift") ||
                  ((e == "critical" || e == "not_critical") && c.scenario == "variational");
  if (!ok) throw InputError("[scenario] expect: '" + e + "' does not apply to scenario '" + c.scenario + "'");
}

}  // namespace detail

/// Runs a scenario. InputError and its subclasses signal configuration or
/// initial data problems; everything else is reported through the checks.
inline RunResult run(const ScenarioConfig& c) {
  detail::check_expect(c);
  const MetricChart chart = detail::chart_for(c);
  RunResult r;
  r.scenario = c.scenario;
  r.metric = chart.name();
  if (c.scenario == "tensors") detail::run_tensors(chart, c, r);
  else if (c.scenario == "conformal_geodesic") detail::run_conformal_geodesic(chart, c, r);
  else if (c.scenario == "null_geodesic") detail::run_null_geodesic(chart, c, r);
  else if (c.scenario == "chain_lift") detail::run_chain_lift(chart, c, r);
  else if (c.scenario == "flatness") detail::run_flatness(chart, c, r);
  else if (c.scenario == "total_torsion") detail::run_total_torsion(chart, c, r);
  else detail::run_variational(chart, c, r);
  return r;
}

/// Checks everything that can be checked without running: registry names,
/// grid, and the scenario's constraints on the initial data. Returns notes;
/// throws InputError on the first problem.
inline std::vector<std::string> validate(const ScenarioConfig& c) {
  std::vector<std::string> notes;
  detail::check_expect(c);
  const MetricChart chart = detail::chart_for(c);
  notes.push_back("metric " + chart.name() + " ok");
  if (c.scenario != "tensors" && c.scenario != "flatness") {
    const long n = detail::intervals(c);
    notes.push_back("grid of " + std::to_string(n) + " intervals");
  }
  if (c.scenario == "tensors") make_upsilon(c.rescale);
  if (c.scenario == "conformal_geodesic" ||
      (c.curve == "integrated" && (c.scenario == "chain_lift" || c.scenario == "total_torsion" || c.scenario == "variational"))) {
    chart.require_inside(c.point);
    if (!(point_geometry(chart, c.point).norm(c.velocity) > 0.0)) throw InputError("[initial] velocity: must be nonzero");
    notes.push_back("initial 2-jet ok");
  }
  if (c.scenario == "null_geodesic") {
    chart.require_inside(c.point);
    detail::initial_null_state(chart, c);
    notes.push_back("initial null state ok");
  }
  if (c.scenario == "chain_lift" || c.scenario == "variational") {
    if (detail::intervals(c) % 2 != 0 || detail::intervals(c) < 10)
      throw InputError("[integration] the grid needs an even number of intervals, at least 10");
  }
  if (c.scenario == "variational" && !(c.epsilon > 0.0)) throw InputError("[sampling] epsilon: must be positive");
  return notes;
}

inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return detail::format_double(v);
}

inline void write_csv(std::ostream& os, const RunResult& r) {
  for (std::size_t i = 0; i < r.columns.size(); ++i) os << (i ? "," : "") << r.columns[i];
  os << '\n';
  for (const auto& row : r.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_number(row[i]);
    os << '\n';
  }
}

inline nlohmann::ordered_json summary_json(const RunResult& r) {
  nlohmann::ordered_json j;
  j["scenario"] = r.scenario;
  j["metric"] = r.metric;
  j["status"] = r.status;
  if (!r.message.empty()) j["message"] = r.message;
  j["passed"] = r.passed();
  for (const auto& [k, v] : r.summary.items()) j[k] = v;
  nlohmann::ordered_json checks = nlohmann::ordered_json::array();
  for (const auto& c : r.checks)
    checks.push_back({{"name", c.name}, {"value", c.value}, {"relation", c.relation}, {"bound", c.bound}, {"passed", c.passed}});
  j["checks"] = checks;
  return j;
}

inline void write_json(std::ostream& os, const RunResult& r) {
  nlohmann::ordered_json j;
  j["summary"] = summary_json(r);
  j["columns"] = r.columns;
  j["rows"] = r.rows;
  os << j.dump(1) << '\n';
}

/// "key: value" lines; arrays are space separated.
inline void write_summary(std::ostream& os, const RunResult& r) {
  const auto j = summary_json(r);
  for (const auto& [k, v] : j.items()) {
    if (k == "checks") continue;
    os << k << ": ";
    if (v.is_array()) {
      for (std::size_t i = 0; i < v.size(); ++i) os << (i ? " " : "") << format_number(v[i].get<double>());
    } else if (v.is_number_float()) {
      os << format_number(v.get<double>());
    } else if (v.is_string()) {
      os << v.get<std::string>();
    } else {
      os << v.dump();
    }
    os << '\n';
  }
  for (const auto& c : r.checks)
    os << "check " << c.name << ": " << format_number(c.value) << ' ' << c.relation << ' ' << format_number(c.bound)
       << ' ' << (c.passed ? "PASS" : "FAIL") << '\n';
}

inline std::string list_metrics(const std::string& filter = {}) {
  std::ostringstream os;
  auto emit = [&](const char* kind, const std::vector<RegistryEntry>& list) {
    for (const auto& e : list) {
      if (!filter.empty() && e.name.find(filter) == std::string::npos) continue;
      os << kind << ' ' << e.name;
      for (const auto& [k, v] : e.defaults) os << ' ' << k << '=' << detail::format_double(v);
      os << "  # " << e.description << '\n';
    }
  };
  emit("metric", metric_entries());
  emit("upsilon", upsilon_entries());
  return os.str();
}

}  // namespace confgeo::cli
