#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <random>

#include "test_support.hpp"

using namespace confgeo;
using testing_support::random_point;
using testing_support::random_vector;

namespace {

MetricChart rescaled_nil() {
  MetricSpec s;
  s.name = "nil";
  s.upsilon = "sinusoidal";
  return make_metric(s);
}

/// Random state satisfying the cone and nullity constraints.
NullFrameState random_state(const MetricChart& chart, std::mt19937_64& rng, double half = 0.5) {
  std::normal_distribution<double> n(0.0, 1.0);
  NullFrameState s;
  s.point.x = random_point(rng, half);
  const PointGeometry pg = point_geometry(chart, s.point.x);
  s.point.zeta = random_null_vector(pg, rng);
  s.c0 = 1.0 + 0.2 * n(rng);
  s.c1 = Complex(0.5 * n(rng), 0.5 * n(rng));
  s.u2 = Complex(0.5 * n(rng), 0.5 * n(rng));
  s.u3 = -2.0 * (s.c1 * std::conj(s.u2)).real() / s.c0;
  return s;
}

}  // namespace

TEST(NullCoframe, ConstructionAndCrossIdentities) {
  std::mt19937_64 rng(7);
  for (const auto& chart : {make_metric("nil"), rescaled_nil(), make_metric("hyperbolic")}) {
    for (int k = 0; k < 10; ++k) {
      const Vec3 x = random_point(rng, 0.4);
      const PointGeometry pg = point_geometry(chart, x);
      const Vec3 d = random_vector(rng);
      const CVec3 z = null_vector_along(pg, d, 0.7 * k);
      EXPECT_LT(cone_residuals(pg, z).max(), 1e-14);
      const Vec3 e = eta(pg, z);
      EXPECT_LT(max_abs(e - d / pg.norm(d)), 1e-13);
      // η × ζ̄ = iζ̄,  ζ × η = iζ
      EXPECT_LT(max_abs(pg.cross(complexify(e), conj(z)) - I * conj(z)), 1e-13);
      EXPECT_LT(max_abs(pg.cross(z, complexify(e)) - I * z), 1e-13);
    }
  }
  EXPECT_THROW(null_vector_along(point_geometry(make_metric("nil"), {}), Vec3{}), InputError);
}

TEST(NullCoframe, RenormalizationIsNearestAndIdempotent) {
  std::mt19937_64 rng(8);
  const auto chart = make_metric("nil");
  const Vec3 x{{0.3, -0.2, 0.1}};
  const PointGeometry pg = point_geometry(chart, x);
  const CVec3 z0 = random_null_vector(pg, rng);
  CVec3 z = z0;
  EXPECT_LT(renormalize(pg, z), 1e-14);
  EXPECT_LT(max_abs(z - z0), 1e-14);
  CVec3 w = z0 + Complex(1e-3, 2e-3) * complexify(random_vector(rng));
  const double drift = renormalize(pg, w);
  EXPECT_GT(drift, 1e-4);
  EXPECT_LT(cone_residuals(pg, w).max(), 1e-14);
  EXPECT_LT(max_abs(w - z0), 1e-2);
  EXPECT_LT(max_abs(eta(pg, w) - eta(pg, z0)), 1e-2);
}

TEST(AdaptedComponents, RoundTripAndSignature) {
  std::mt19937_64 rng(9);
  const auto chart = rescaled_nil();
  const NullFrameState s = random_state(chart, rng);
  const PointGeometry pg = point_geometry(chart, s.point.x);
  const Vec3 xd = reconstruct_velocity(pg, s.point.zeta, s.c0, s.c1);
  const CVec3 nz = reconstruct_nabla_zeta(pg, s.point.zeta, s.u2, s.u3);
  const AdaptedComponents c = adapted_components(pg, s.point.zeta, xd, nz);
  EXPECT_NEAR(c.c0, s.c0, 1e-13);
  EXPECT_NEAR(std::abs(c.c1 - s.c1), 0.0, 1e-13);
  EXPECT_NEAR(std::abs(c.u2 - s.u2), 0.0, 1e-13);
  EXPECT_NEAR(c.u3, s.u3, 1e-13);
  EXPECT_NEAR(nullity(c), 0.0, 1e-13);

  // g^F in the real basis (c0, Re c1, Im c1, Re u2, Im u2, u3)
  auto unit = [](int k) {
    AdaptedComponents a;
    switch (k) {
      case 0: a.c0 = 1; break;
      case 1: a.c1 = 1; break;
      case 2: a.c1 = I; break;
      case 3: a.u2 = 1; break;
      case 4: a.u2 = I; break;
      default: a.u3 = 1;
    }
    return a;
  };
  Eigen::Matrix<double, 6, 6> G;
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) G(i, j) = fefferman_inner(unit(i), unit(j));
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, 6, 6>> es(G);
  int pos = 0, neg = 0;
  for (int i = 0; i < 6; ++i) (es.eigenvalues()(i) > 0 ? pos : neg)++;
  EXPECT_EQ(pos, 3);
  EXPECT_EQ(neg, 3);

  CVec3 bad = s.point.zeta;
  bad[0] += 0.1;
  EXPECT_THROW(adapted_components(pg, bad, xd, nz), InputError);
}

TEST(NullGeodesic, RejectsInvalidInitialState) {
  std::mt19937_64 rng(10);
  const auto chart = make_metric("nil");
  NullFrameState s = random_state(chart, rng);
  s.u3 += 0.1;
  EXPECT_THROW(integrate_null_geodesic(chart, s, 0, 1), InputError);
  s = random_state(chart, rng);
  s.point.zeta = 1.1 * s.point.zeta;
  EXPECT_THROW(integrate_null_geodesic(chart, s, 0, 1), InputError);
  s = random_state(chart, rng);
  EXPECT_THROW(integrate_null_geodesic(chart, s, 1, 0), InputError);
}

TEST(NullGeodesic, EuclideanChainIsCircle) {
  const auto chart = make_metric("euclidean");
  const PointGeometry pg = point_geometry(chart, {});
  NullFrameState s;
  s.point.zeta = null_vector_along(pg, {{1, 0, 0}});
  s.c0 = 1.0;
  s.u2 = Complex(0.3, 0.4);
  const auto g = integrate_null_geodesic(chart, s, 0.0, 6.0);
  ASSERT_EQ(g.status, CurveStatus::complete);
  const DiscreteCurve c = projected_curve(chart, g);
  // κ = √2 |u2| with unit speed
  const double r = 1.0 / (std::sqrt(2.0) * 0.5);
  const Vec3 center = r * r * c.s[0].a;
  double dev = 0;
  for (const auto& st : c.s) dev = std::max(dev, std::abs(coord_norm(st.x - center) - r));
  EXPECT_LT(dev, 1e-9);
  for (const auto& st : g.states) {
    EXPECT_NEAR(std::abs(st.u2 - s.u2), 0.0, 1e-14);
    EXPECT_NEAR(st.u3, 0.0, 1e-14);
  }
}

TEST(NullGeodesic, EuclideanProjectionsAreCircles) {
  std::mt19937_64 rng(11);
  const auto chart = make_metric("euclidean");
  for (int k = 0; k < 5; ++k) {
    const auto g = integrate_null_geodesic(chart, random_state(chart, rng), 0.0, 2.0);
    ASSERT_EQ(g.status, CurveStatus::complete);
    const DiscreteCurve c = projected_curve(chart, g);
    EXPECT_LT(oracle::circle_fit_deviation(testing_support::eigen_points(c)), 1e-7);
    EXPECT_LT(is_conformal_geodesic(chart, c, 1e-6).max_residual, 1e-6);
  }
}

TEST(NullGeodesic, ConstraintsAndNullityConserved) {
  std::mt19937_64 rng(12);
  for (const auto& chart : {make_metric("nil"), rescaled_nil(), make_metric("round_sphere")}) {
    const auto g = integrate_null_geodesic(chart, random_state(chart, rng, 0.3), 0.0, 2.0);
    ASSERT_EQ(g.status, CurveStatus::complete) << g.message;
    EXPECT_LT(g.max_renormalization, 1e-10);
    for (const auto& st : g.states) {
      const PointGeometry pg = point_geometry(chart, st.point.x);
      EXPECT_LT(cone_residuals(pg, st.point.zeta).max(), 1e-14);
      EXPECT_NEAR(nullity(st.components()), 0.0, 1e-9);
    }
  }
}

TEST(NullGeodesic, ProjectedJerkIdentity) {
  // j − |ẋ|² P(ẋ) = −(2|u2|² + u3² + P(ẋ, ẋ)) ẋ on null states
  std::mt19937_64 rng(13);
  for (const auto& chart : {make_metric("nil"), rescaled_nil(), make_metric("hyperbolic")}) {
    for (int k = 0; k < 20; ++k) {
      const NullFrameState s = random_state(chart, rng, 0.4);
      const PointGeometry pg = point_geometry(chart, s.point.x);
      Vec3 j;
      const CurveState st = project(pg, s, &j);
      const double v2 = pg.inner(st.v, st.v);
      const double lam = 2.0 * std::norm(s.u2) + s.u3 * s.u3 + contract(pg.schouten, st.v, st.v);
      EXPECT_LT(max_abs(j - v2 * pg.schouten_raised(st.v) + lam * st.v), 1e-12);
      // hence the unparametrized conformal geodesic equation holds exactly
      EXPECT_LT(pg.norm(unparam_residual(pg, st, j)), 1e-12);
    }
  }
}

TEST(NullGeodesic, ProjectionIsConformalGeodesic) {
  std::mt19937_64 rng(14);
  for (const auto& chart : {make_metric("nil"), rescaled_nil(), make_metric("hyperbolic")}) {
    const auto g = integrate_null_geodesic(chart, random_state(chart, rng, 0.1), 0.0, 0.5);
    ASSERT_EQ(g.status, CurveStatus::complete);
    const DiscreteCurve c = projected_curve(chart, g);
    EXPECT_LT(is_conformal_geodesic(chart, c, 1e-6).max_residual, 1e-6) << chart.name();
  }
}

TEST(NullGeodesic, CovariantDerivativeOfEtaAlongFlow) {
  // ∇η = i(u2 ζ̄ − ū2 ζ) and g(∇∇η, η) = −2|u2|², from differences along the flow
  std::mt19937_64 rng(15);
  const auto chart = rescaled_nil();
  const auto g = integrate_null_geodesic(chart, random_state(chart, rng, 0.3), 0.0, 1.0);
  const double h = g.t[1] - g.t[0];
  std::vector<Vec3> e, ne;
  std::vector<PointGeometry> pgs;
  for (const auto& st : g.states) {
    pgs.push_back(point_geometry(chart, st.point.x));
    e.push_back(eta(pgs.back(), st.point.zeta));
  }
  auto velocity = [&](std::size_t i) {
    return reconstruct_velocity(pgs[i], g.states[i].point.zeta, g.states[i].c0, g.states[i].c1);
  };
  for (std::size_t i = 0; i < e.size(); ++i)
    ne.push_back(detail::stencil_derivative(e, i, h) + pgs[i].gamma_contract(velocity(i), e[i]));
  for (std::size_t i = 2; i + 2 < e.size(); i += 50) {
    const auto& st = g.states[i];
    const Vec3 expect = real(I * (st.u2 * conj(st.point.zeta) - std::conj(st.u2) * st.point.zeta));
    EXPECT_LT(max_abs(ne[i] - expect), 1e-9);
    const Vec3 nne = detail::stencil_derivative(ne, i, h) + pgs[i].gamma_contract(velocity(i), ne[i]);
    EXPECT_NEAR(pgs[i].inner(nne, e[i]), -2.0 * std::norm(st.u2), 1e-7);
  }
}

TEST(NullGeodesic, PhaseEquivariance) {
  // (ζ, c1, u2) → e^{is}(ζ, c1, u2) maps null geodesics to null geodesics over the same base curve
  std::mt19937_64 rng(16);
  const auto chart = make_metric("nil");
  const NullFrameState s = random_state(chart, rng, 0.3);
  const Complex rot = std::exp(I * 0.9);
  NullFrameState r = s;
  r.point.zeta = rot * s.point.zeta;
  r.c1 = rot * s.c1;
  r.u2 = rot * s.u2;
  const auto a = integrate_null_geodesic(chart, s, 0.0, 1.0);
  const auto b = integrate_null_geodesic(chart, r, 0.0, 1.0);
  ASSERT_EQ(a.states.size(), b.states.size());
  for (std::size_t i = 0; i < a.states.size(); ++i) {
    EXPECT_LT(max_abs(a.states[i].point.x - b.states[i].point.x), 1e-12);
    EXPECT_LT(max_abs(rot * a.states[i].point.zeta - b.states[i].point.zeta), 1e-12);
    EXPECT_LT(std::abs(rot * a.states[i].u2 - b.states[i].u2), 1e-12);
  }
}

TEST(NullGeodesic, LeavesDomain) {
  const auto chart = make_metric("hyperbolic");
  const PointGeometry pg = point_geometry(chart, {});
  NullFrameState s;
  s.point.zeta = null_vector_along(pg, {{1, 0, 0}});
  s.c0 = 1.0;
  const auto g = integrate_null_geodesic(chart, s, 0.0, 10.0);
  EXPECT_EQ(g.status, CurveStatus::left_domain);
  EXPECT_LT(g.t.back(), 10.0);
}

TEST(ChainLift, EuclideanCircleAndHelix) {
  const auto chart = make_metric("euclidean");
  const auto circle = sample_curve(chart, make_parametric(curves::Circle{2.0, {}}), 0.0, 3.0, 1000);
  const ChainLift lc = canonical_chain_lift(chart, circle);
  EXPECT_LT(lc.max_residual, 1e-9);
  EXPECT_EQ(lc.states.size(), 501u);
  for (const auto& st : lc.states) EXPECT_NEAR(std::abs(st.u2), 0.5 / std::sqrt(2.0), 1e-12);

  // (cos t, sin t, t): κ = τ = 1/2, residual κτ |g(ζ, B)| = 1/(4√2)
  const auto helix = sample_curve(chart, make_parametric(curves::Helix{}), 0.0, 4.0, 1000);
  const ChainLift lh = canonical_chain_lift(chart, helix);
  EXPECT_NEAR(lh.max_residual, 0.25 / std::sqrt(2.0), 1e-8);
}

TEST(ChainLift, RecoversProjectedChain) {
  std::mt19937_64 rng(17);
  const auto chart = rescaled_nil();
  NullFrameState s;
  s.point.x = random_point(rng, 0.3);
  s.point.zeta = random_null_vector(point_geometry(chart, s.point.x), rng);
  s.c0 = 1.0;
  s.u2 = Complex(0.4, -0.3);
  const auto g = integrate_null_geodesic(chart, s, 0.0, 1.0);
  const DiscreteCurve c = projected_curve(chart, g);
  const ChainLift lift = canonical_chain_lift(chart, c);
  EXPECT_LT(lift.max_residual, 1e-7);
}

TEST(ChainLift, RejectsBadInput) {
  const auto chart = make_metric("euclidean");
  auto c = sample_curve(chart, make_parametric(curves::Circle{}), 0.0, 1.0, 101);
  EXPECT_THROW(canonical_chain_lift(chart, c), InputError);
  c = sample_curve(chart, make_parametric(curves::Line{{}, {}}), 0.0, 1.0, 100);
  EXPECT_THROW(canonical_chain_lift(chart, c), InputError);
}

TEST(FeffermanCurvature, NilOrigin) {
  const auto chart = make_metric("nil");
  const PointGeometry pg = point_geometry(chart, {});
  // η = ∂z, ζ = (∂x + i∂y)/√2 at the origin
  const CVec3 z = null_vector_along(pg, {{0, 0, 1}});
  const auto rep = fefferman_curvature(chart, {{}, z});
  EXPECT_NEAR(rep.ricci_00.real(), 2.0 * 0.625, 1e-12);
  EXPECT_NEAR(rep.ricci_11b.real(), 2.0 * -0.375, 1e-12);
  EXPECT_NEAR(std::abs(rep.ricci_11), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(rep.ricci_01), 0.0, 1e-12);
  EXPECT_EQ(rep.ricci_22b, Complex(1.0));
  EXPECT_EQ(rep.ricci_33, Complex(1.0));
  EXPECT_EQ(rep.scalar, Complex(0.0));
  // *C = diag(−½, −½, 1)
  EXPECT_NEAR(std::abs(rep.weyl_0101b - 0.5), 0.0, 1e-9);
  EXPECT_NEAR(std::abs(rep.weyl_01b01b), 0.0, 1e-9);
  EXPECT_NEAR(std::abs(rep.weyl_01b11b), 0.0, 1e-9);
  EXPECT_NEAR(std::abs(rep.weyl_11b11b - 1.0), 0.0, 1e-9);
}

TEST(FeffermanCurvature, FullTableContractsToRicciAndWeyl) {
  std::mt19937_64 rng(18);
  for (const auto& chart : {make_metric("nil"), rescaled_nil(), make_metric("round_sphere")}) {
    for (int k = 0; k < 5; ++k) {
      const Vec3 x = random_point(rng, 0.4);
      const CVec3 z = random_null_vector(point_geometry(chart, x), rng);
      const auto rep = fefferman_curvature(chart, {x, z});
      EXPECT_LT(rep.ricci_consistency, 1e-12) << chart.name();
      EXPECT_LT(rep.weyl_consistency, 1e-12) << chart.name();
      EXPECT_EQ(rep.scalar, Complex(0.0));
    }
  }
}

TEST(FeffermanCurvature, RejectsOffConeZeta) {
  const auto chart = make_metric("nil");
  EXPECT_THROW(fefferman_curvature(chart, {{}, CVec3{{1, 0, 0}}}), InputError);
}

TEST(Flatness, RegistryVerdicts) {
  std::mt19937_64 rng(19);
  std::vector<Vec3> pts;
  for (int k = 0; k < 8; ++k) pts.push_back(random_point(rng, 0.4));
  MetricSpec rs;
  rs.name = "round_sphere";
  rs.upsilon = "quadratic";
  for (const auto& chart : {make_metric("euclidean"), make_metric("round_sphere"), make_metric("hyperbolic"),
                            make_metric(rs)}) {
    const auto r = conformal_flatness_check(chart, pts, 4, 1e-6);
    EXPECT_TRUE(r.conformally_flat) << chart.name();
    EXPECT_TRUE(r.consistent) << chart.name();
    EXPECT_LT(r.max_star_cotton, 1e-9);
  }
  for (const auto& chart : {make_metric("nil"), rescaled_nil()}) {
    const auto r = conformal_flatness_check(chart, pts, 4, 1e-6);
    EXPECT_FALSE(r.conformally_flat);
    EXPECT_TRUE(r.consistent);
    EXPECT_GT(r.max_weyl, 0.1);
  }
}
