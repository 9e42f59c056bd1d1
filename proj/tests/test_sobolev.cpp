#include <gtest/gtest.h>

#include <ldspec/catalog.hpp>
#include <ldspec/sobolev.hpp>

using namespace ldspec;

namespace {

/// Dense midpoint double sum for the Gagliardo seminorm on (a, b), skipping the diagonal.
double midpoint_gagliardo(const TestFunction& f, double a, double b, double s, int n) {
  const double h = (b - a) / n;
  std::vector<double> vals(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) vals[std::size_t(i)] = f(a + (i + 0.5) * h).real();
  double acc = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) {
        const double d = vals[std::size_t(i)] - vals[std::size_t(j)];
        acc += d * d / std::pow(std::abs(i - j) * h, 1 + 2 * s);
      }
  return std::sqrt(acc * h * h);
}

}  // namespace

TEST(Fourier, GaussNormsMatchClosedForms) {
  const TestFunction g = make_function("gauss");
  EXPECT_NEAR(hs_norm_fourier(g, 0).value, std::pow(M_PI, 0.25), 1e-10);
  // ||f||^2 + ||f'||^2 = sqrt(pi) + sqrt(pi)/2
  EXPECT_NEAR(hs_norm_fourier(g, 1).value, std::sqrt(1.5 * std::sqrt(M_PI)), 1e-10);
}

TEST(Fourier, FilonPathMatchesAnalyticTransform) {
  TestFunction g = make_function("gauss", {{"mu", 0.5}, {"sigma", 0.8}});
  const TestFunction analytic = g;
  g.fourier = nullptr;
  const FourierTransform F(g);
  for (double xi : {0.0, 0.7, 3.0, 9.0}) EXPECT_NEAR(std::abs(F(xi) - analytic.fourier(xi)), 0.0, 1e-10) << xi;
}

TEST(Fourier, FilonNormOfBumpMatchesL2) {
  const TestFunction b = make_function("bump", {{"lo", -1.0}, {"hi", 1.0}});
  EXPECT_NEAR(hs_norm_fourier(b, 0).value, l2_norm(b).value, 1e-7);
}

TEST(Fourier, JumpLimitsRegularityToBelowOneHalf) {
  const TestFunction bx = make_function("box");
  EXPECT_EQ(hs_norm_fourier(bx, 0.4).status, Status::Member);
  EXPECT_EQ(hs_norm_fourier(bx, 0.5).status, Status::NonMember);
  EXPECT_EQ(hs_norm_fourier(bx, 0.75).status, Status::NonMember);
}

TEST(Moments, GaussAndSlowDecay) {
  EXPECT_NEAR(weighted_moment_norm(make_function("gauss"), 1).value, std::sqrt(std::sqrt(M_PI) / 2), 1e-10);
  const TestFunction p1 = make_function("power", {{"p", 1.0}});
  EXPECT_EQ(weighted_moment_norm(p1, 1).status, Status::NonMember);
  EXPECT_NEAR(l2_norm(p1).value, std::sqrt(M_PI), 1e-8);
}

TEST(Gagliardo, LinearFunctionOnUnitInterval) {
  // int int |x - y|^{2 - 1 - 2s} over the unit square at s = 1/4 equals 8/15
  GagliardoConfig c;
  c.s = 0.25;
  EXPECT_NEAR(gagliardo_seminorm(make_function("monomial"), Interval{0, 1}, c).value, std::sqrt(8.0 / 15), 1e-10);
}

TEST(Gagliardo, HatAgainstDenseMidpointSum) {
  const TestFunction h = make_function("hat");
  GagliardoConfig c;
  c.s = 0.3;
  const double ours = gagliardo_seminorm(h, Interval{0, 2 * M_PI}, c).value;
  EXPECT_NEAR(ours, midpoint_gagliardo(h, 0, 2 * M_PI, 0.3, 2000), 1e-4 * ours);
}

TEST(Gagliardo, SymmetricPairingEqualsFullIntegral) {
  const TestFunction h = make_function("hat");
  GagliardoConfig c;
  c.s = 0.3;
  const double half = gagliardo_seminorm(h, Interval{0, 2 * M_PI}, c).value;
  c.symmetric_pairing = false;
  EXPECT_NEAR(gagliardo_seminorm(h, Interval{0, 2 * M_PI}, c).value, half, 1e-12 * half);
}

TEST(Gagliardo, LineSeminormEqualsWeightedFourierIntegral) {
  // for e^{-x^2/2}: int |xi|^{2s} e^{-xi^2} dxi = Gamma(s + 1/2)
  GagliardoConfig c;
  for (double s : {0.25, 0.5, 0.75}) {
    c.s = s;
    const double g = gagliardo_seminorm(make_function("gauss"), std::nullopt, c).value;
    EXPECT_NEAR(g * g / (fourier_gagliardo_constant(s) * std::tgamma(s + 0.5)), 1.0, 1e-5) << s;
  }
}

TEST(Gagliardo, JumpDivergesAtOneHalfAndAbove) {
  GagliardoConfig c;
  c.s = 0.6;
  EXPECT_EQ(gagliardo_seminorm(make_function("box"), Interval{-1, 2}, c).status, Status::NonMember);
  c.s = 0.45;
  EXPECT_EQ(gagliardo_seminorm(make_function("box"), Interval{-1, 2}, c).status, Status::Member);
}

TEST(Interval, SineH1NormAndKinkRule) {
  EXPECT_NEAR(hs_norm_interval(make_function("sine"), Interval{0, 2 * M_PI}, 1).value, std::sqrt(2 * M_PI), 1e-10);
  const TestFunction h = make_function("hat");
  EXPECT_EQ(hs_norm_interval(h, Interval{0, 2 * M_PI}, 1.4).status, Status::Member);
  EXPECT_EQ(hs_norm_interval(h, Interval{0, 2 * M_PI}, 1.6).status, Status::NonMember);
}

TEST(Interval, RejectsEmptyInterval) {
  EXPECT_THROW(hs_norm_interval(make_function("gauss"), Interval{1, 1}, 0.5), Error);
}
