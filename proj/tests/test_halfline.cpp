#include <gtest/gtest.h>

#include <sstream>

#include <ldspec/halfline.hpp>
#include <ldspec/special.hpp>

using namespace ldspec;

TEST(Special, BesselJ1AtOneMatchesSeries) {
  // J_1(1) = sum_m (-1)^m (1/2)^{2m+1} / (m! (m+1)!)
  double acc = 0, term = 0.5;
  for (int m = 0; m < 20; ++m) {
    acc += term;
    term *= -0.25 / ((m + 1.0) * (m + 2.0));
  }
  EXPECT_NEAR(bessel_j(1.0, 1.0), acc, 1e-14);
}

TEST(Special, BesselJHalfIsElementary) {
  for (double z : {0.1, 1.0, 7.5, 40.0}) EXPECT_NEAR(bessel_j(0.5, z), std::sqrt(2 / (M_PI * z)) * std::sin(z), 1e-12);
}

TEST(Eigenfunctions, DirichletAndNeumannClosedForms) {
  EXPECT_NEAR(phi_alpha(M_PI, 4, 0.3), -std::sin(0.6) / 2, 1e-14);
  EXPECT_NEAR(phi_alpha(M_PI / 2, 4, 0.3), -std::cos(0.6), 1e-14);
}

TEST(Eigenfunctions, DensityIsDerivativeOfSpectralFunction) {
  for (double a : {M_PI / 2, 3 * M_PI / 4, M_PI})
    for (double l : {0.3, 2.0, 40.0}) {
      const double h = 1e-4 * l;
      const double nd = (rho_alpha(a, l + h) - rho_alpha(a, l - h)) / (2 * h);
      EXPECT_NEAR(nd, density_alpha(a, l), 1e-7 * density_alpha(a, l)) << a << " " << l;
    }
}

TEST(Operators, RejectOutOfRangeParameters) {
  EXPECT_THROW(HalflineOperator(1.0), Error);
  EXPECT_THROW(BesselOperator(0.0), Error);
}

TEST(Transform, ParsevalAndH1) {
  const TestFunction b = make_function("bump", {{"lo", 0.5}, {"hi", 1.5}});
  const HalflineTransform T(HalflineOperator(M_PI), b);
  const double l2 = l2_norm(b).value;
  EXPECT_NEAR(fractional_norm(T, 0).value, l2, 1e-6 * l2);
  const double h1 = std::hypot(l2, l2_norm(derivative(b, 1)).value);
  EXPECT_NEAR(fractional_norm(T, 1).value, h1, 1e-5 * h1);
}

TEST(Transform, BesselHalfMatchesDirichlet) {
  const TestFunction b = make_function("wave-packet", {{"omega", 4.0}, {"lo", 0.5}, {"hi", 3.0}});
  const HalflineTransform D(HalflineOperator(M_PI), b), B(BesselOperator(0.5), b);
  for (double k : {0.5, 3.0, 9.0}) EXPECT_NEAR(std::abs(D(k)), std::abs(B(k)), 1e-6);
  EXPECT_NEAR(fractional_norm(B, 0.5).value, fractional_norm(D, 0.5).value, 1e-4);
}

TEST(Transform, EigenRelationForSmoothCompactFunction) {
  const TestFunction b = make_function("bump", {{"lo", 0.5}, {"hi", 1.5}});
  const HalflineTransform T(HalflineOperator(3 * M_PI / 4), b), T2(HalflineOperator(3 * M_PI / 4), apply_periodic_operator(b));
  EXPECT_NEAR(std::abs(T2(5.0) - 5.0 * T(5.0)), 0.0, 1e-5);

  TestFunction tg = apply_periodic_operator(b);
  tg.value = [b](double x) { return -b.deriv(2, x) + (4 - 0.25) / (x * x) * b(x); };
  const HalflineTransform B(BesselOperator(2), b), B2(BesselOperator(2), tg);
  EXPECT_NEAR(std::abs(B2(5.0) - 5.0 * B(5.0)), 0.0, 1e-5);
}

TEST(Predicate, HalfGaussSplitsByBoundaryCondition) {
  const TestFunction hg = make_function("half-gauss");
  for (double s : {0.3, 0.75}) {
    const HalflineTransform N(HalflineOperator(M_PI / 2), hg), D(HalflineOperator(M_PI), hg);
    EXPECT_EQ(fractional_norm(N, s).status, Status::Member);
    EXPECT_EQ(as_status(boundary_predicate(HalflineOperator(M_PI / 2), hg, s).prediction), Status::Member);
    const Status expect = s < 0.5 ? Status::Member : Status::NonMember;
    EXPECT_EQ(fractional_norm(D, s).status, expect);
    EXPECT_EQ(as_status(boundary_predicate(HalflineOperator(M_PI), hg, s).prediction), expect);
  }
}

TEST(Predicate, SupportEndInsideHalfLineIsAJump) {
  // box on [0, 1] jumps at x = 1 even though it is constant on its support
  const TestFunction bx = make_function("box", {{"a", 0.0}, {"b", 1.0}});
  EXPECT_EQ(boundary_predicate(HalflineOperator(M_PI / 2), bx, 0.75).prediction, Prediction::PredictedNonMember);
  EXPECT_EQ(boundary_predicate(HalflineOperator(M_PI / 2), bx, 0.3).prediction, Prediction::PredictedMember);
}

TEST(Hardy, ZeroTraceAndNonzeroTrace) {
  EXPECT_TRUE(hardy_quotient(make_function("bump", {{"lo", 0.5}, {"hi", 1.5}})).finite());
  EXPECT_FALSE(hardy_quotient(make_function("half-gauss")).finite());
}

TEST(Samples, CsvHasFixedHeader) {
  const SpectralSamples s = transform(HalflineOperator(M_PI), make_function("bump", {{"lo", 0.5}, {"hi", 1.5}}),
                                      geometric_grid(0.1, 10, 5));
  std::ostringstream os;
  s.write_csv(os);
  EXPECT_EQ(os.str().rfind("lambda,re,im,density\n", 0), 0u);
  EXPECT_EQ(s.lambda.size(), 11u);
}
