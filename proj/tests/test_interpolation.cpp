#include <gtest/gtest.h>

#include <ldspec/interpolation.hpp>
#include <ldspec/studies.hpp>

using namespace ldspec;

namespace {

/// C_{k,theta} = Gamma(-a) sum_{j=1}^{2k} (-1)^j binom(2k, j) j^a, a = 2 k theta non-integer.
double semigroup_constant_oracle(int k, double theta) {
  const double a = 2 * k * theta;
  double acc = 0, binom = 1;
  for (int j = 1; j <= 2 * k; ++j) {
    binom *= double(2 * k - j + 1) / j;
    acc += (j % 2 ? -1.0 : 1.0) * binom * std::pow(double(j), a);
  }
  return std::tgamma(-a) * acc;
}

std::shared_ptr<const SpectralMeasure> atoms(std::vector<Atom> a) {
  return std::make_shared<const SpectralMeasure>(SpectralMeasure::discrete(std::move(a)));
}

CoefficientVector unit(std::shared_ptr<const SpectralMeasure> mu, std::size_t i) {
  std::vector<cplx> c(mu->atoms().size(), 0.0);
  c[i] = 1.0;
  CoefficientVector x = CoefficientVector::on(mu, c);
  x.finitely_supported = true;
  return x;
}

}  // namespace

TEST(Constants, SemigroupHalfIsTwoLogTwo) { EXPECT_NEAR(semigroup_constant(1, 0.5), 2 * std::log(2.0), 1e-10); }

TEST(Constants, SemigroupMatchesBinomialGammaSum) {
  for (int k : {1, 2, 3})
    for (double th : {0.2, 0.3, 0.7}) {
      const double o = semigroup_constant_oracle(k, th);
      EXPECT_NEAR(semigroup_constant(k, th), o, 1e-9 * std::abs(o)) << k << " " << th;
    }
}

TEST(Constants, ResolventIsBetaFunction) {
  EXPECT_NEAR(resolvent_constant(1, 0.5), 1.0, 1e-14);
  // B(1/2, 3/2) = pi/2
  EXPECT_NEAR(resolvent_constant(1, 0.25), M_PI / 2, 1e-13);
}

TEST(Constants, InterpolationConstant) { EXPECT_NEAR(interpolation_constant(0.5), M_PI, 1e-15); }

TEST(Pair, ValidatesParameters) {
  auto mu = atoms({{1, 1}, {4, 1}});
  EXPECT_THROW(InterpolationPair(mu, 1, 1.0), Error);
  EXPECT_THROW(InterpolationPair(mu, 0, 0.5), Error);
  EXPECT_THROW(InterpolationPair(atoms({{0.5, 1}}), 1, 0.5), Error);
}

TEST(KFunctional, SingleAtomClosedForm) {
  auto mu = atoms({{3, 2.0}});
  const InterpolationPair P(mu, 1, 0.5);
  const CoefficientVector x = unit(mu, 0);
  for (double t : {0.01, 1.0, 50.0}) {
    const double v = t * 9;
    EXPECT_NEAR(k_functional(x, P, t), std::sqrt(2.0 * v / (1 + v)), 1e-14);
  }
}

TEST(Characterizations, SingleAtomScaling) {
  auto mu = atoms({{1, 1}, {4, 1}, {10, 1}, {100, 1}});
  for (std::size_t i = 0; i < 4; ++i) {
    const double l = mu->atoms()[i].lambda;
    const CoefficientVector x = unit(mu, i);
    const InterpolationPair P1(mu, 1, 0.5), P3(mu, 3, 0.3);
    EXPECT_NEAR(semigroup_characterization(x, P1).value / (l * semigroup_constant(1, 0.5)), 1.0, 1e-10);
    EXPECT_NEAR(resolvent_characterization(x, P1).value / (l * resolvent_constant(1, 0.5)), 1.0, 1e-10);
    EXPECT_NEAR(interpolation_integral(x, P1).value / (l * M_PI), 1.0, 1e-10);
    const double l18 = std::pow(l, 1.8);
    EXPECT_NEAR(semigroup_characterization(x, P3).value / (l18 * semigroup_constant(3, 0.3)), 1.0, 1e-10);
    EXPECT_NEAR(resolvent_characterization(x, P3).value / (l18 * resolvent_constant(3, 0.3)), 1.0, 1e-10);
    EXPECT_NEAR(interpolation_integral(x, P3).value / (l18 * interpolation_constant(0.3)), 1.0, 1e-10);
  }
}

TEST(Characterizations, HarmonicDecayThreshold) {
  auto mu = std::make_shared<const SpectralMeasure>(
      SpectralMeasure::sequence([](int n) { return double(n); }, [](int) { return 1.0; }, 4096));
  std::vector<cplx> c;
  for (int n = 1; n <= 4096; ++n) c.push_back(1.0 / n);
  const CoefficientVector x = CoefficientVector::on(mu, c);
  const DivergencePolicy pol{4, 12};
  for (double th : {0.2, 0.5}) {
    const InterpolationPair P(mu, 1, th);
    const Status expect = th < 0.25 ? Status::Member : Status::NonMember;
    EXPECT_EQ(interpolation_integral(x, P, pol).status, expect);
    EXPECT_EQ(semigroup_characterization(x, P, pol).status, expect);
    EXPECT_EQ(resolvent_characterization(x, P, pol).status, expect);
  }
}

TEST(Characterizations, StressRowAgrees) {
  const studies::StressOutcome s = studies::stress_agreement(studies::stress_matrix(4096, {{2, 0.25}}));
  EXPECT_EQ(s.expected, s.vectors) << (s.failures.empty() ? "" : s.failures.front());
}

TEST(Identity, RatioIsTheInterpolationConstant) {
  auto mu = std::make_shared<const SpectralMeasure>(
      SpectralMeasure::sequence([](int n) { return double(n); }, [](int) { return 1.0; }, 4096));
  std::vector<cplx> c;
  for (int n = 1; n <= 4096; ++n) c.push_back(std::pow(double(n), -1.05));
  const ConsistencyReport r = spectral_identity_consistency(CoefficientVector::on(mu, c), 1.0, 0.5, {4, 12});
  EXPECT_TRUE(r.agree);
  EXPECT_EQ(r.interpolation, Status::Member);
  EXPECT_NEAR(r.ratio, M_PI, 1e-8);
}

TEST(Mehler, PositionSpaceSemigroupIntegral) {
  const auto f = OscillatorState::combination({0.5, cplx(0, 0.3), 0.0, 0.7, 0.2});
  EXPECT_LT(mehler_semigroup_crosscheck(f, 0.5).relative_gap(), 1e-8);
}
