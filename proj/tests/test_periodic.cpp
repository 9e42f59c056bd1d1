#include <gtest/gtest.h>

#include <ldspec/periodic.hpp>

using namespace ldspec;

namespace {

/// Romberg-extrapolated trapezoid rule on [a, b] for a smooth complex integrand.
template <class F>
cplx romberg(F&& g, double a, double b, int levels = 12) {
  std::vector<std::vector<cplx>> R(static_cast<std::size_t>(levels));
  double h = b - a;
  R[0].push_back(0.5 * h * (g(a) + g(b)));
  for (int i = 1; i < levels; ++i) {
    h *= 0.5;
    cplx mid = 0;
    for (long k = 1; k < (1L << i); k += 2) mid += g(a + double(k) * h);
    R[std::size_t(i)].push_back(0.5 * R[std::size_t(i - 1)][0] + h * mid);
    double p = 4;
    for (int j = 1; j <= i; ++j, p *= 4)
      R[std::size_t(i)].push_back(R[std::size_t(i)][std::size_t(j - 1)] +
                                  (R[std::size_t(i)][std::size_t(j - 1)] - R[std::size_t(i - 1)][std::size_t(j - 1)]) /
                                      (p - 1));
  }
  return R.back().back();
}

/// c_n = (2 pi)^{-1/2} int_0^{2 pi} f(x) e^{-i k_n x} dx, split at the breakpoints.
cplx oracle_coefficient(const TestFunction& f, double phi, int n, std::vector<double> cuts) {
  const double k = n - phi / (2 * M_PI);
  auto g = [&](double x) { return f(x) * std::polar(1.0, -k * x); };
  cuts.insert(cuts.begin(), 0.0);
  cuts.push_back(2 * M_PI);
  cplx acc = 0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) acc += romberg(g, cuts[i], cuts[i + 1]);
  return acc / std::sqrt(2 * M_PI);
}

}  // namespace

TEST(Analyze, ConstantHasClosedFormCoefficients) {
  const PeriodicCoefficients pc = analyze(make_function("const"), M_PI, 4096);
  for (int n : {-5, 0, 1, 7, 100})
    EXPECT_NEAR(std::abs(pc.at(n)), 2 / std::sqrt(2 * M_PI) / std::abs(0.5 - n), 1e-13) << n;
  // slow 1/n^2 tail: the truncated energy misses about 4/(pi N) of ||1||^2
  EXPECT_GT(pc.parseval_defect, 0.0);
  EXPECT_LT(pc.parseval_defect, 1e-4);
}

TEST(Analyze, HatAgainstRombergOracle) {
  const TestFunction h = make_function("hat");
  const PeriodicCoefficients pc = analyze(h, 1.0, 64);
  for (int n : {-3, 0, 2, 17}) EXPECT_NEAR(std::abs(pc.at(n) - oracle_coefficient(h, 1.0, n, {M_PI})), 0.0, 1e-11) << n;
}

TEST(Analyze, EigenfunctionHasSingleCoefficient) {
  const PeriodicCoefficients pc = analyze(make_function("fourier-mode", {{"n", 3}, {"phi", 1.0}}), 1.0, 64);
  EXPECT_NEAR(std::abs(pc.at(3)), 1.0, 1e-12);
  for (int n = -64; n <= 64; ++n)
    if (n != 3) EXPECT_LT(std::abs(pc.at(n)), 1e-12);
}

TEST(Analyze, RejectsPhiOutsideRange) {
  EXPECT_THROW(analyze(make_function("const"), 2 * M_PI, 16), Error);
  EXPECT_THROW(analyze(make_function("const"), -0.1, 16), Error);
}

TEST(Membership, ConstantThresholdAtOneHalf) {
  const TestFunction one = make_function("const");
  EXPECT_EQ(fractional_membership(one, M_PI, 0.4).status, Status::Member);
  EXPECT_EQ(fractional_membership(one, M_PI, 0.6).status, Status::NonMember);
  EXPECT_EQ(fractional_membership(one, 0.0, 0.75).status, Status::Member);
}

TEST(BoundaryRule, AgreesWithSpectralVerdicts) {
  for (const char* name : {"const", "sine", "hat", "monomial"}) {
    const TestFunction f = parse_function(name);
    for (double phi : {0.0, M_PI})
      for (double s : {0.3, 0.75}) {
        const Status spec = fractional_membership(f, phi, s).status;
        if (spec == Status::Indeterminate) continue;
        EXPECT_EQ(spec, as_status(boundary_characterization(f, phi, s).prediction))
            << name << " phi=" << phi << " s=" << s;
      }
  }
}

TEST(BoundaryRule, HigherOrderChecksDerivatives) {
  // sin x: f' (0) = 1 but e^{i pi} f'(2 pi) = -1, which matters above s = 3/2
  const TestFunction s = make_function("sine");
  EXPECT_EQ(higher_order_membership(s, M_PI, 1.25).prediction, Prediction::PredictedMember);
  EXPECT_EQ(higher_order_membership(s, M_PI, 1.75).prediction, Prediction::PredictedNonMember);
  EXPECT_EQ(higher_order_membership(s, 0.0, 1.75).prediction, Prediction::PredictedMember);
}

TEST(SplitSeminorm, WrapAroundMatchesOracleForEigenfunction) {
  // for psi_0 the whole seminorm is int_0^{2 pi} t^{-1-2s} 4 sin^2(k t / 2) dt, k = -phi/(2 pi)
  const double phi = 1.0, s = 0.6, k = -phi / (2 * M_PI);
  const SplitSeminorm sp = split_seminorm_AB(make_function("fourier-mode", {{"n", 0}, {"phi", phi}}), phi, s);
  // substitution t = u^5 removes the endpoint singularity; composite Simpson in u
  const int n = 20000;
  const double U = std::pow(2 * M_PI, 0.2), h = U / n;
  auto g = [&](double u) {
    if (u == 0) return 0.0;
    const double t = std::pow(u, 5);
    return std::pow(t, -1 - 2 * s) * 4 * std::pow(std::sin(k * t / 2), 2) * 5 * std::pow(u, 4);
  };
  double acc = g(0) + g(U);
  for (int i = 1; i < n; ++i) acc += (i % 2 ? 4 : 2) * g(i * h);
  const double oracle = acc * h / 3;
  EXPECT_NEAR(sp.total(), oracle, 1e-8 * oracle);
}

TEST(SplitSeminorm, ConstantWrapAroundDivergesForPi) {
  EXPECT_TRUE(split_seminorm_AB(make_function("const"), 0.0, 0.75).finite());
  EXPECT_FALSE(split_seminorm_AB(make_function("const"), M_PI, 0.75).finite());
}

TEST(Translation, IsUnitaryAndFullTurnIsPhase) {
  const TestFunction h = make_function("hat");
  const TestFunction t = translate(h, 1.0, 0.7);
  EXPECT_NEAR(l2_norm_interval(t, {0, 2 * M_PI}), l2_norm_interval(h, {0, 2 * M_PI}), 1e-12);
  const TestFunction full = translate(h, 1.0, 2 * M_PI);
  EXPECT_NEAR(std::abs(full(1.0) - std::polar(1.0, 1.0) * h(1.0)), 0.0, 1e-14);
}

TEST(Operator, EigenRelation) {
  const TestFunction psi = make_function("fourier-mode", {{"n", 3}, {"phi", 1.0}});
  const PeriodicCoefficients pa = analyze(apply_periodic_operator(psi), 1.0, 16);
  EXPECT_NEAR(pa.at(3).real(), PeriodicOperator(1.0).eigenvalue(3), 1e-11);
}

TEST(Realizations, DirichletAndNeumann) {
  const TestFunction one = make_function("const");
  EXPECT_EQ(realization_membership(one, Realization::Dirichlet, 0.3).status, Status::Member);
  EXPECT_EQ(realization_membership(one, Realization::Dirichlet, 0.75).status, Status::NonMember);
  EXPECT_EQ(realization_membership(one, Realization::Neumann, 0.75).status, Status::Member);
}

TEST(Threshold, DomainRelationsHold) {
  EXPECT_TRUE(threshold_comparison(0.3, 0, M_PI, make_function("hat")).consistent());
  EXPECT_TRUE(threshold_comparison(0.75, 0, M_PI, make_function("const")).consistent());
  EXPECT_TRUE(threshold_comparison(0.5, 0, M_PI, make_function("bump", {{"lo", 0.0}, {"hi", 2 * M_PI}})).consistent());
}

TEST(Hardy, VanishingEndsAreFinite) {
  EXPECT_TRUE(hardy_quotient_interval(make_function("bump", {{"lo", 0.0}, {"hi", 2 * M_PI}})).finite());
  EXPECT_FALSE(hardy_quotient_interval(make_function("const")).finite());
}
