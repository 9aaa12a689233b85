#include <gtest/gtest.h>

#include <random>

#include "test_support.hpp"

using namespace confgeo;

TEST(Linalg, ComplexVectorConjugationAndBilinearity) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> n(0, 1);
  Mat3 g;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j <= i; ++j) g(i, j) = g(j, i) = (i == j ? 3.0 : 0.0) + 0.3 * n(rng);
  for (int trial = 0; trial < 50; ++trial) {
    const CVec3 z = make_complex(testing_support::random_vector(rng), testing_support::random_vector(rng));
    const CVec3 w = make_complex(testing_support::random_vector(rng), testing_support::random_vector(rng));
    const Complex s(n(rng), n(rng));
    EXPECT_NEAR(std::abs(contract(g, s * z, w) - s * contract(g, z, w)), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(std::conj(contract(g, z, w)) - contract(g, conj(z), conj(w))), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(contract(g, z, conj(z)).imag()), 0.0, 1e-12);
    EXPECT_GT(contract(g, z, conj(z)).real(), 0.0);
    const CVec3 back = make_complex(real(z), imag(z));
    EXPECT_EQ(max_abs(back - z), 0.0);
  }
}

TEST(Linalg, InverseAndDeterminant) {
  Mat3 a;
  a(0, 0) = 2; a(0, 1) = 1; a(0, 2) = 0.5;
  a(1, 0) = -1; a(1, 1) = 3; a(1, 2) = 0.25;
  a(2, 0) = 0.1; a(2, 1) = 0.2; a(2, 2) = 4;
  EXPECT_NEAR(max_abs(a * inverse(a) - Mat3::identity()), 0.0, 1e-14);
  EXPECT_NEAR(det(a), 2 * (12 - 0.05) - 1 * (-4 - 0.025) + 0.5 * (-0.2 - 0.3), 1e-13);
}

TEST(Linalg, CholeskyRejectsIndefinite) {
  Mat3 g = Mat3::identity();
  EXPECT_TRUE(is_positive_definite(g));
  g(2, 2) = -1e-3;
  EXPECT_FALSE(is_positive_definite(g));
  g(2, 2) = 1;
  g(0, 1) = g(1, 0) = 1.0;
  EXPECT_FALSE(is_positive_definite(g));
}

TEST(Dual, NestedThirdDerivative) {
  using D1 = Dual<double>;
  using D2 = Dual<D1>;
  using D3 = Dual<D2>;
  const double t = 0.7;
  const D3 x(D2(D1(t, 1), D1(1, 0)), D2(D1(1, 0), D1(0, 0)));
  const D3 f = sin(x) * exp(x);
  // d/dt e^t sin t = e^t (sin + cos); d2 = 2 e^t cos; d3 = 2 e^t (cos − sin)
  EXPECT_NEAR(f.re.re.re, std::exp(t) * std::sin(t), 1e-15);
  EXPECT_NEAR(f.re.re.eps, std::exp(t) * (std::sin(t) + std::cos(t)), 1e-14);
  EXPECT_NEAR(f.eps.eps.re, 2 * std::exp(t) * std::cos(t), 1e-14);
  EXPECT_NEAR(f.eps.eps.eps, 2 * std::exp(t) * (std::cos(t) - std::sin(t)), 1e-14);
}
